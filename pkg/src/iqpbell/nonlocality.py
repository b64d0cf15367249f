"""Bell-expression values, cosine and marginal decompositions, WWZB functional.

The full correlator of an IQP Bell test is

    E(x) = 2^{-n} sum_y exp(i (phi_x(y) - phi_x(~y)))

with ``~y`` the bitwise complement.  Pairing ``y`` with ``~y`` turns it into
``2^{n-1}`` cosines of equal weight, each linear in the setting bits; that
is what :func:`cosine_decomposition` returns.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import _bits
from ._parallel import ordered_map
from .errors import InputShapeError
from .expressions import (
    STATED_LIFTED_BOUND,
    Interpretation,
    ghz_expression,
    lifted_expression,
    quantum_behaviour,
)
from .lhv import LiftedBound, lhv_bound_lifted
from .phasepoly import (
    Angle,
    DiagonalUnitary,
    IQPBellTest,
    PhaseTerm,
    phase_numerators,
    restrict,
)
from .simulator import CorrelatorTable, correlator_table, fwht

__all__ = [
    "CorrelatorTable",
    "CosineTerm",
    "WWZBResult",
    "LiftedBellResult",
    "MarginalComponent",
    "ghz_bell_value",
    "lifted_bell_value",
    "wwzb",
    "cosine_decomposition",
    "evaluate_cosine_terms",
    "marginal_decomposition",
    "marginal_average",
    "analytic_transform",
    "pairing_identity_check",
    "cosine_table",
    "random_bell_test",
    "SweepRow",
    "sweep_trial",
    "wwzb_sweep",
]

GHZ_LHV_BOUND = 3


def ghz_bell_value(test: IQPBellTest) -> float:
    """Sum of post-selected success probabilities of the GHZ parity game."""
    return float(ghz_expression(quantum_behaviour(test)))


@dataclass(frozen=True)
class LiftedBellResult:
    quantum_value: float
    interpretation: Interpretation
    classical: LiftedBound
    vacuous: tuple = ()
    excluded: tuple = ()

    @property
    def classical_bound(self):
        return self.classical.bound

    @property
    def stated_bound(self) -> int:
        return STATED_LIFTED_BOUND

    @property
    def violation(self) -> bool:
        return self.quantum_value > self.classical_bound + 1e-9

    def to_dict(self) -> dict:
        return {
            "interpretation": self.interpretation.value,
            "quantum_value": self.quantum_value,
            "classical_bound": float(self.classical_bound),
            "classical_bound_exact": str(self.classical_bound),
            "stated_bound": self.stated_bound,
            "witness_strategy": self.classical.witness.to_dict(),
            "violation": self.violation,
            "vacuous_cells": [list(c) for c in self.vacuous],
            "excluded_cells": [list(c) for c in self.excluded],
        }


def lifted_bell_value(test: IQPBellTest, interpretation=Interpretation.CONDITIONAL) -> LiftedBellResult:
    """Quantum value of the lifted expression alongside its exhaustive LHV bound."""
    interpretation = Interpretation(interpretation)
    q = lifted_expression(quantum_behaviour(test), interpretation)
    return LiftedBellResult(
        float(q.value),
        interpretation,
        lhv_bound_lifted(interpretation),
        tuple(q.vacuous),
        tuple(q.excluded),
    )


@dataclass(frozen=True)
class WWZBResult:
    transform: np.ndarray = field(repr=False)
    total: float
    bound: int

    @property
    def ratio(self) -> float:
        return self.total / self.bound

    def satisfied(self, tol: float = 1e-9) -> bool:
        return self.total <= self.bound + tol


def wwzb(table: CorrelatorTable) -> WWZBResult:
    """``S = sum_a |sum_x (-1)^{a.x} E(x)|`` against the local bound ``2**n``."""
    transform = fwht(table.values)
    total = np.abs(transform).sum()
    total = int(total) if np.issubdtype(transform.dtype, np.integer) else float(total)
    return WWZBResult(transform, total, 1 << table.n)


@dataclass(frozen=True)
class CosineTerm:
    """``weight * cos(frequency . x + offset)``; ``y`` is the pair representative."""

    weight: float
    frequency: np.ndarray
    offset: float
    y: int

    def __call__(self, x: int) -> float:
        bits = np.array(_bits.to_bits(x, len(self.frequency)))
        return self.weight * math.cos(float(self.frequency @ bits) + self.offset)


def _reduce_angle(value: float) -> float:
    """Into ``(-pi, pi]``."""
    r = math.remainder(value, 2 * math.pi)
    return math.pi if r == -math.pi else r


def cosine_decomposition(test: IQPBellTest, mask=None) -> list[CosineTerm]:
    """Full-parity correlator as ``2**(n-1)`` equally weighted cosines."""
    n = test.n
    full = (1 << n) - 1
    if mask is not None and _bits.as_mask(mask, n) != full:
        raise InputShapeError("cosine_decomposition needs the full parity mask; use marginal_decomposition first")
    k, den = phase_numerators(test.base_unitary)
    thetas = np.array([a.radians for a in test.input_angles])
    weight = 1.0 / (1 << (n - 1))
    terms = []
    for y in range(1 << (n - 1)):  # y < ~y exactly when the top bit is 0
        ybar = full ^ y
        c = Angle(int(k[y] - k[ybar]), den).radians
        signs = np.array([2 * b - 1 for b in _bits.to_bits(y, n)])
        terms.append(CosineTerm(weight, thetas * signs, _reduce_angle(c), y))
    return terms


def evaluate_cosine_terms(terms: list[CosineTerm], n: int) -> np.ndarray:
    xs = np.array([_bits.to_bits(x, n) for x in range(1 << n)])
    out = np.zeros(1 << n)
    for t in terms:
        out += t.weight * np.cos(xs @ t.frequency + t.offset)
    return out


@dataclass(frozen=True)
class MarginalComponent:
    weight: float
    test: IQPBellTest
    qubits: tuple[int, ...]

    def setting(self, x: int) -> int:
        """Induced setting index of the restricted test."""
        return sum(((x >> q) & 1) << i for i, q in enumerate(self.qubits))


def marginal_decomposition(test: IQPBellTest, mask) -> list[MarginalComponent]:
    """Split a k-qubit parity correlator into ``2**(n-k)`` full correlators.

    Each qubit outside ``mask`` is fixed to 0 and to 1 in turn; the original
    correlator is the uniform average of the restricted tests' full
    correlators at the induced settings.
    """
    n = test.n
    mask = _bits.as_mask(mask, n)
    if mask == 0:
        raise InputShapeError("parity mask must be nonempty")
    keep = _bits.mask_qubits(mask, n)
    drop = [q for q in range(n) if not (mask >> q) & 1]
    pieces = [(test.base_unitary, tuple(range(n)))]
    # highest index first so lower labels stay valid
    for q in reversed(drop):
        nxt = []
        for u, labels in pieces:
            pos = labels.index(q)
            rest = labels[:pos] + labels[pos + 1:]
            nxt.extend((restrict(u, pos, b), rest) for b in (0, 1))
        pieces = nxt
    weight = 1.0 / len(pieces)
    angles = tuple(test.input_angles[q] for q in keep)
    return [MarginalComponent(weight, IQPBellTest(len(keep), u, angles), keep) for u, _ in pieces]


def marginal_average(components: list[MarginalComponent], n: int) -> np.ndarray:
    """Weighted average of the components' full correlators at every ``n``-bit setting."""
    out = np.zeros(1 << n)
    for comp in components:
        table = correlator_table(comp.test).values
        out += comp.weight * np.array([table[comp.setting(x)] for x in range(1 << n)])
    return out


def analytic_transform(f, c: float) -> np.ndarray:
    """Closed-form ``sum_x (-1)^{a.x} cos(f.x + c)`` for every ``a``.

    Equals ``2^n cos(c + sum_m beta_m/2) prod_m cos(beta_m/2)`` with
    ``beta_m = a_m pi + f_m``.
    """
    f = np.asarray(f, dtype=float)
    n = len(f)
    a = np.array([_bits.to_bits(i, n) for i in range(1 << n)], dtype=float).reshape(1 << n, n)
    half = (a * np.pi + f) / 2
    return (1 << n) * np.cos(c + half.sum(axis=1)) * np.prod(np.cos(half), axis=1)


def cosine_table(f, c: float) -> CorrelatorTable:
    f = np.asarray(f, dtype=float)
    n = len(f)
    xs = np.array([_bits.to_bits(x, n) for x in range(1 << n)], dtype=float).reshape(1 << n, n)
    return CorrelatorTable(n, np.cos(xs @ f + c))


def pairing_identity_check(f, c: float) -> tuple[WWZBResult, WWZBResult]:
    """``(analytic, numeric)`` WWZB results for the single correlator ``cos(f.x + c)``."""
    f = np.asarray(f, dtype=float)
    analytic = analytic_transform(f, c)
    numeric = wwzb(cosine_table(f, c))
    return WWZBResult(analytic, float(np.abs(analytic).sum()), 1 << len(f)), numeric


def random_bell_test(n: int, rng: np.random.Generator, max_support: int = 3) -> IQPBellTest:
    """Random test: up to ``3n`` distinct supports of size 1-3, angles in pi/8 steps."""
    supports = [
        s
        for size in range(1, min(max_support, n) + 1)
        for s in itertools.combinations(range(n), size)
    ]
    count = int(rng.integers(1, min(3 * n, len(supports)) + 1))
    chosen = rng.choice(len(supports), size=count, replace=False)
    terms = tuple(PhaseTerm(supports[i], Angle(int(rng.integers(0, 16)), 8)) for i in sorted(chosen))
    thetas = tuple(Angle(int(rng.integers(0, 16)), 8) for _ in range(n))
    return IQPBellTest(n, DiagonalUnitary(n, terms), thetas)


@dataclass(frozen=True)
class SweepRow:
    trial: int
    n: int
    full_total: float
    marginal_mask: int
    marginal_total: float
    component_max_ratio: float
    decomposition_error: float | None = None
    weight_sum: float | None = None
    term_count: int | None = None

    @property
    def max_ratio(self) -> float:
        return max(self.full_total, self.marginal_total) / (1 << self.n)

    def to_dict(self) -> dict:
        return {
            "trial": self.trial,
            "n": self.n,
            "wwzb_total_full": self.full_total,
            "marginal_mask": _bits.to_string(self.marginal_mask, self.n),
            "wwzb_total_marginal": self.marginal_total,
            "wwzb_bound": 1 << self.n,
            "component_max_ratio": self.component_max_ratio,
            "decomposition_error": self.decomposition_error,
            "weight_sum": self.weight_sum,
            "term_count": self.term_count,
        }


def sweep_trial(seed: int, trial: int, n: int, decompose: bool = False) -> SweepRow:
    """One seeded random test: WWZB on the full mask and on a random proper mask."""
    rng = np.random.default_rng([seed, trial])
    test = random_bell_test(n, rng)
    full = correlator_table(test)
    full_total = wwzb(full).total
    mask = int(rng.integers(1, (1 << n) - 1))
    marginal = correlator_table(test, mask)
    components = marginal_decomposition(test, mask)
    comp_ratio = max(wwzb(correlator_table(c.test)).ratio for c in components)
    err = wsum = count = None
    if decompose:
        terms = cosine_decomposition(test)
        err = float(np.max(np.abs(evaluate_cosine_terms(terms, n) - full.values)))
        wsum = float(sum(t.weight for t in terms))
        count = len(terms)
    return SweepRow(trial, n, full_total, mask, wwzb(marginal).total, comp_ratio, err, wsum, count)


def wwzb_sweep(trials: int, seed: int, n_min: int = 2, n_max: int = 6, decompose: bool = False) -> list[SweepRow]:
    """Trial ``t`` uses ``n = n_min + t mod (n_max - n_min + 1)`` and RNG seed ``[seed, t]``."""
    if trials < 1:
        raise InputShapeError("trials must be at least 1")
    if not 2 <= n_min <= n_max:
        raise InputShapeError("need 2 <= n_min <= n_max")
    span = n_max - n_min + 1
    return ordered_map(
        lambda t: sweep_trial(seed, t, n_min + t % span, decompose), range(trials)
    )
