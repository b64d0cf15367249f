"""Phase-polynomial representation of diagonal unitaries.

A diagonal unitary on ``n`` qubits is stored as a list of :class:`PhaseTerm`
objects.  Each term multiplies the basis state ``|y>`` by ``exp(i*theta)``
when every qubit in its support is 1, so the total phase is

    phi(y) = global_phase + sum(theta_t for t in terms if support(t) <= ones(y))

All angles are rational multiples of pi and all arithmetic here is exact.
Qubits are 0-based; ``R(theta)`` on qubit ``q`` is the term ``({q}, theta)``
and a controlled-Z on ``{a, b}`` is ``({a, b}, pi)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

import numpy as np

from . import _bits
from .errors import InputShapeError, QubitCountMismatch

__all__ = [
    "Angle",
    "PhaseTerm",
    "DiagonalUnitary",
    "IQPCircuit",
    "IQPBellTest",
    "phase_of",
    "phase_numerators",
    "phase_vector",
    "compose",
    "realize",
    "restrict",
    "r_gate",
    "cz",
]


@dataclass(frozen=True)
class Angle:
    """``num/den * pi`` radians, reduced, with ``0 <= num < 2*den``."""

    num: int = 0
    den: int = 1

    def __post_init__(self):
        num, den = int(self.num), int(self.den)
        if den == 0:
            raise ZeroDivisionError("angle denominator must be nonzero")
        if den < 0:
            num, den = -num, -den
        g = math.gcd(num, den)
        num, den = num // g, den // g
        object.__setattr__(self, "num", num % (2 * den))
        object.__setattr__(self, "den", den)

    @classmethod
    def from_fraction(cls, value) -> Angle:
        value = Fraction(value)
        return cls(value.numerator, value.denominator)

    @classmethod
    def parse(cls, text: str) -> Angle:
        """Parse ``"p/q"`` or ``"p"`` in units of pi."""
        return cls.from_fraction(Fraction(text.strip()))

    @property
    def fraction(self) -> Fraction:
        """Multiple of pi in ``[0, 2)``."""
        return Fraction(self.num, self.den)

    @property
    def signed(self) -> Fraction:
        """Multiple of pi in ``(-1, 1]``."""
        f = self.fraction
        return f - 2 if f > 1 else f

    @property
    def radians(self) -> float:
        return float(self.signed) * math.pi

    def is_zero(self) -> bool:
        return self.num == 0

    def __add__(self, other: Angle) -> Angle:
        if not isinstance(other, Angle):
            return NotImplemented
        return Angle.from_fraction(self.fraction + other.fraction)

    def __sub__(self, other: Angle) -> Angle:
        if not isinstance(other, Angle):
            return NotImplemented
        return Angle.from_fraction(self.fraction - other.fraction)

    def __neg__(self) -> Angle:
        return Angle(-self.num, self.den)

    def __mul__(self, k: int) -> Angle:
        if not isinstance(k, (int, np.integer)):
            return NotImplemented
        return Angle(self.num * int(k), self.den)

    __rmul__ = __mul__

    def __str__(self):
        s = self.signed
        return str(s.numerator) if s.denominator == 1 else f"{s.numerator}/{s.denominator}"


ZERO = Angle(0)
PI = Angle(1)


@dataclass(frozen=True)
class PhaseTerm:
    support: tuple[int, ...]
    angle: Angle

    def __post_init__(self):
        support = tuple(sorted({int(q) for q in self.support}))
        if not support:
            raise ValueError("phase term support must be nonempty")
        if support[0] < 0:
            raise InputShapeError(f"negative qubit index {support[0]}")
        object.__setattr__(self, "support", support)
        if not isinstance(self.angle, Angle):
            object.__setattr__(self, "angle", Angle.from_fraction(self.angle))

    @property
    def mask(self) -> int:
        return sum(1 << q for q in self.support)

    def fires(self, y: int) -> bool:
        return y & self.mask == self.mask


def _merge(terms) -> tuple[PhaseTerm, ...]:
    acc: dict[tuple[int, ...], Angle] = {}
    for t in terms:
        acc[t.support] = acc.get(t.support, ZERO) + t.angle
    merged = [PhaseTerm(s, a) for s, a in acc.items() if not a.is_zero()]
    merged.sort(key=lambda t: (len(t.support), t.support))
    return tuple(merged)


@dataclass(frozen=True)
class DiagonalUnitary:
    """Canonical phase polynomial: terms merged by support, zero angles dropped.

    ``global_phase`` only ever becomes nonzero through :func:`restrict`; it
    never affects a probability or correlator.
    """

    n: int
    terms: tuple[PhaseTerm, ...] = ()
    global_phase: Angle = field(default=ZERO)

    def __post_init__(self):
        if self.n < 0:
            raise InputShapeError("qubit count must be nonnegative")
        terms = tuple(self.terms)
        for t in terms:
            if t.support[-1] >= self.n:
                raise InputShapeError(
                    f"term support {t.support} does not fit in {self.n} qubits"
                )
        object.__setattr__(self, "terms", _merge(terms))

    @classmethod
    def identity(cls, n: int) -> DiagonalUnitary:
        return cls(n)

    def __len__(self):
        return len(self.terms)


def r_gate(qubit: int, angle) -> PhaseTerm:
    """``R(angle) = |0><0| + e^{i angle}|1><1|`` with angle in units of pi."""
    return PhaseTerm((qubit,), angle if isinstance(angle, Angle) else Angle.from_fraction(angle))


def cz(a: int, b: int) -> PhaseTerm:
    return PhaseTerm((a, b), PI)


def phase_of(u: DiagonalUnitary, y) -> Angle:
    """Exact phase picked up by basis state ``y``."""
    y = _bits.to_index(y, u.n)
    total = u.global_phase
    for t in u.terms:
        if t.fires(y):
            total = total + t.angle
    return total


def _common_den(u: DiagonalUnitary) -> int:
    dens = [t.angle.den for t in u.terms] + [u.global_phase.den]
    return reduce(math.lcm, dens, 1)


def phase_numerators(u: DiagonalUnitary) -> tuple[np.ndarray, int]:
    """Exact phases of all ``2**n`` basis states.

    Returns ``(k, den)`` such that ``phi(y) = k[y] * pi / den`` with
    ``0 <= k[y] < 2*den``.
    """
    den = _common_den(u)
    modulus = 2 * den
    idx = np.arange(1 << u.n, dtype=np.int64)
    acc = np.full(1 << u.n, u.global_phase.num * (den // u.global_phase.den), dtype=np.int64)
    for t in u.terms:
        m = t.mask
        acc[(idx & m) == m] += t.angle.num * (den // t.angle.den)
        acc %= modulus
    return acc % modulus, den


def phase_vector(u: DiagonalUnitary) -> np.ndarray:
    """Phases in radians, reduced to ``(-pi, pi]``."""
    k, den = phase_numerators(u)
    k = np.where(k > den, k - 2 * den, k)
    return k * (np.pi / den)


def compose(a: DiagonalUnitary, b: DiagonalUnitary) -> DiagonalUnitary:
    if a.n != b.n:
        raise QubitCountMismatch(f"cannot compose {a.n}-qubit and {b.n}-qubit unitaries")
    return DiagonalUnitary(a.n, a.terms + b.terms, a.global_phase + b.global_phase)


def restrict(u: DiagonalUnitary, qubit: int, bit: int) -> DiagonalUnitary:
    """Fix ``qubit`` to computational-basis value ``bit``.

    The returned unitary acts on the remaining ``n - 1`` qubits, relabelled in
    order.  Terms that collapse to an empty support are folded into
    ``global_phase``.
    """
    if not 0 <= qubit < u.n:
        raise InputShapeError(f"qubit {qubit} out of range for {u.n} qubits")
    if bit not in (0, 1):
        raise InputShapeError(f"bit must be 0 or 1, got {bit!r}")

    def relabel(support):
        return tuple(q - 1 if q > qubit else q for q in support if q != qubit)

    terms = []
    phase = u.global_phase
    for t in u.terms:
        if qubit in t.support:
            if not bit:
                continue
            rest = relabel(t.support)
            if rest:
                terms.append(PhaseTerm(rest, t.angle))
            else:
                phase = phase + t.angle
        else:
            terms.append(PhaseTerm(relabel(t.support), t.angle))
    return DiagonalUnitary(u.n - 1, tuple(terms), phase)


@dataclass(frozen=True)
class IQPCircuit:
    """``|+>^n``, a diagonal unitary, then X-basis measurement of ``measured``."""

    n: int
    unitary: DiagonalUnitary
    measured: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.unitary.n != self.n:
            raise QubitCountMismatch(
                f"circuit has {self.n} qubits but unitary acts on {self.unitary.n}"
            )
        measured = tuple(range(self.n)) if self.measured is None else tuple(sorted(set(self.measured)))
        for q in measured:
            if not 0 <= q < self.n:
                raise InputShapeError(f"measured qubit {q} out of range for {self.n} qubits")
        object.__setattr__(self, "measured", measured)


@dataclass(frozen=True)
class IQPBellTest:
    """The family ``U_x = U * prod_m R(theta_m)^{x_m}`` over settings ``x``."""

    n: int
    base_unitary: DiagonalUnitary
    input_angles: tuple[Angle, ...]

    def __post_init__(self):
        if self.base_unitary.n != self.n:
            raise QubitCountMismatch(
                f"Bell test has {self.n} qubits but base unitary acts on {self.base_unitary.n}"
            )
        angles = tuple(a if isinstance(a, Angle) else Angle.from_fraction(a) for a in self.input_angles)
        if len(angles) != self.n:
            raise InputShapeError(f"expected {self.n} input angles, got {len(angles)}")
        object.__setattr__(self, "input_angles", angles)

    def circuit(self, x) -> IQPCircuit:
        return IQPCircuit(self.n, realize(self, x))


def realize(test: IQPBellTest, x) -> DiagonalUnitary:
    """The unitary applied for setting string ``x``."""
    x = _bits.to_index(x, test.n)
    extra = tuple(
        PhaseTerm((m,), theta)
        for m, theta in enumerate(test.input_angles)
        if (x >> m) & 1 and not theta.is_zero()
    )
    return compose(test.base_unitary, DiagonalUnitary(test.n, extra))
