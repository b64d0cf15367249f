"""Exact state-vector simulation of IQP circuits.

An IQP circuit prepares ``|+>^n``, applies a diagonal unitary with phases
``phi(y)`` and measures in the X basis.  The amplitude of outcome ``z`` is

    a_z = 2^{-n} sum_y (-1)^{y.z} exp(i phi(y))

so one phase-vector fill plus one Walsh-Hadamard transform gives the whole
output distribution.  Outcome 0 corresponds to the ``|+>`` projector.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from . import _bits
from ._parallel import ordered_map
from .errors import ImpossibleEventError, InputShapeError, ResourceError
from .phasepoly import DiagonalUnitary, IQPBellTest, IQPCircuit, phase_vector, realize


DEFAULT_MAX_QUBITS = 20
HARD_MAX_QUBITS = 24
CLAMP_FLOOR = 1e-12
NORM_TOL = 1e-10
SAMPLER_ALGORITHM = "numpy-pcg64/inverse-cdf"

__all__ = [
    "StateVector",
    "OutcomeDistribution",
    "CorrelatorTable",
    "fwht",
    "prepare_state",
    "x_basis_amplitudes",
    "run_iqp",
    "postselect",
    "parity_expectation",
    "correlator",
    "correlator_table",
    "sample",
]


def check_qubit_cap(n: int, max_qubits: int | None = None) -> None:
    cap = DEFAULT_MAX_QUBITS if max_qubits is None else max_qubits
    if cap > HARD_MAX_QUBITS:
        raise ResourceError(f"qubit cap {cap} exceeds hard limit {HARD_MAX_QUBITS}")
    if n > cap:
        raise ResourceError(f"{n} qubits exceeds the configured cap of {cap}")


def fwht(v, inplace: bool = False) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform, ``out[z] = sum_y (-1)^{y.z} v[y]``.

    Works for any numeric dtype (integer input stays exact).  With
    ``inplace=True`` the input array is overwritten and returned.
    """
    a = np.asarray(v)
    if a.ndim != 1:
        raise InputShapeError("fwht expects a 1-d vector")
    size = a.shape[0]
    if size == 0 or size & (size - 1):
        raise InputShapeError(f"length {size} is not a power of two")
    if not inplace or a is not v:
        a = a.copy()
    h = 1
    while h < size:
        blocks = a.reshape(-1, 2, h)
        lo = blocks[:, 0, :].copy()
        blocks[:, 0, :] += blocks[:, 1, :]
        blocks[:, 1, :] *= -1
        blocks[:, 1, :] += lo
        h *= 2
    return a


@dataclass(frozen=True)
class StateVector:
    """Computational-basis amplitudes, index bit ``m`` = qubit ``m``."""

    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.amplitudes.shape != (1 << self.n,):
            raise InputShapeError(f"expected {1 << self.n} amplitudes, got {self.amplitudes.shape}")

    @property
    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm - 1.0) <= tol

    def tensor(self) -> np.ndarray:
        """Reshape to ``[2]*n`` with axis ``k`` holding qubit ``k``."""
        t = self.amplitudes.reshape([2] * self.n)
        return t.transpose(tuple(range(self.n - 1, -1, -1))) if self.n else t


def prepare_state(unitary: DiagonalUnitary, max_qubits: int | None = None) -> StateVector:
    """``U |+>^n`` in the computational basis."""
    check_qubit_cap(unitary.n, max_qubits)
    amps = np.exp(1j * phase_vector(unitary)) / np.sqrt(1 << unitary.n)
    return StateVector(unitary.n, amps)


def x_basis_amplitudes(unitary: DiagonalUnitary, max_qubits: int | None = None) -> np.ndarray:
    check_qubit_cap(unitary.n, max_qubits)
    v = np.exp(1j * phase_vector(unitary))
    fwht(v, inplace=True)
    v /= 1 << unitary.n
    return v


@dataclass(frozen=True)
class OutcomeDistribution:
    """Probabilities over ``n``-bit outcome strings, ascending index order.

    ``qubits`` records which circuit qubit each bit came from.
    ``success_probability`` is the probability of all conditioning applied so
    far (1 for an unconditioned distribution).
    """

    n: int
    probs: np.ndarray
    success_probability: float = 1.0
    qubits: tuple[int, ...] | None = None

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.shape != (1 << self.n,):
            raise InputShapeError(f"expected {1 << self.n} probabilities, got {p.shape}")
        if np.any(p < -CLAMP_FLOOR):
            raise ValueError("negative probability")
        p = np.where(p < CLAMP_FLOOR, 0.0, p)
        total = p.sum()
        if abs(total - 1.0) > NORM_TOL:
            raise ValueError(f"probabilities sum to {total!r}, not 1")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)
        qubits = tuple(range(self.n)) if self.qubits is None else tuple(self.qubits)
        if len(qubits) != self.n:
            raise InputShapeError("qubit labels do not match bit count")
        object.__setattr__(self, "qubits", qubits)

    def probability(self, z) -> float:
        return float(self.probs[_bits.to_index(z, self.n)])

    def marginal(self, positions) -> OutcomeDistribution:
        """Distribution of the bits at ``positions`` (indices into this distribution)."""
        keep = sorted(set(_bits.mask_qubits(_bits.as_mask(positions, self.n), self.n)))
        t = self.probs.reshape([2] * self.n) if self.n else self.probs
        drop = tuple(self.n - 1 - q for q in range(self.n) if q not in keep)
        probs = t.sum(axis=drop).reshape(-1) if drop else self.probs.copy()
        return OutcomeDistribution(
            len(keep), probs, self.success_probability, tuple(self.qubits[q] for q in keep)
        )

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "qubits": list(self.qubits),
            "probs": [float(p) for p in self.probs],
            "success_probability": float(self.success_probability),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["z", "probability"])
        for z, p in enumerate(self.probs):
            w.writerow([_bits.to_string(z, self.n), repr(float(p))])
        return buf.getvalue()


def run_iqp(circuit: IQPCircuit, max_qubits: int | None = None) -> OutcomeDistribution:
    """Exact X-basis outcome distribution of the measured qubits."""
    amps = x_basis_amplitudes(circuit.unitary, max_qubits)
    probs = amps.real**2 + amps.imag**2
    full = OutcomeDistribution(circuit.n, probs / probs.sum())
    if circuit.measured == tuple(range(circuit.n)):
        return full
    return full.marginal(circuit.measured)


def postselect(dist: OutcomeDistribution, positions, values) -> OutcomeDistribution:
    """Condition on the bits at ``positions`` taking ``values``.

    ``positions`` index into ``dist`` (not circuit qubit labels).  The result
    keeps all bits; ``success_probability`` multiplies through.
    """
    positions = list(positions)
    values = list(values)
    if not positions:
        raise InputShapeError("postselect needs at least one conditioned bit")
    if len(positions) != len(values):
        raise InputShapeError("positions and values differ in length")
    mask = _bits.as_mask(positions, dist.n)
    if bin(mask).count("1") != len(positions):
        raise InputShapeError("repeated position in postselect")
    target = 0
    for q, b in zip(positions, values):
        if b not in (0, 1):
            raise InputShapeError(f"conditioned value must be 0 or 1, got {b!r}")
        target |= b << q
    idx = np.arange(1 << dist.n)
    keep = (idx & mask) == target
    p_event = float(dist.probs[keep].sum())
    if p_event < CLAMP_FLOOR:
        raise ImpossibleEventError(
            f"conditioning event has probability {p_event:.3g} < {CLAMP_FLOOR:g}"
        )
    probs = np.where(keep, dist.probs, 0.0) / p_event
    return OutcomeDistribution(dist.n, probs, dist.success_probability * p_event, dist.qubits)


def parity_expectation(dist: OutcomeDistribution, mask) -> float:
    """``Pr(parity 0) - Pr(parity 1)`` for the bits selected by ``mask``."""
    mask = _bits.as_mask(mask, dist.n)
    if mask == 0:
        raise InputShapeError("parity mask must be nonempty")
    return float(np.dot(_bits.parity_signs(dist.n, mask), dist.probs))


def correlator(test: IQPBellTest, x, mask, max_qubits: int | None = None) -> float:
    """Correlation function E(x) of the parity of the masked outcomes."""
    mask = _bits.as_mask(mask, test.n)
    if mask == 0:
        raise InputShapeError("parity mask must be nonempty")
    dist = run_iqp(IQPCircuit(test.n, realize(test, x)), max_qubits)
    return parity_expectation(dist, mask)


@dataclass(frozen=True)
class CorrelatorTable:
    """E(x) for every setting string, ascending integer order of ``x``."""

    n: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values)
        if not np.issubdtype(v.dtype, np.integer):
            v = v.astype(float)
        if v.shape != (1 << self.n,):
            raise InputShapeError(f"expected {1 << self.n} correlator values, got {v.shape}")
        if np.any(np.abs(v) > 1 + NORM_TOL):
            raise ValueError("correlator values must lie in [-1, 1]")
        object.__setattr__(self, "values", v)

    def __getitem__(self, x) -> float:
        return self.values[_bits.to_index(x, self.n)]

    def mix(self, other: CorrelatorTable, weight: float) -> CorrelatorTable:
        """``weight * self + (1 - weight) * other``."""
        if other.n != self.n:
            raise InputShapeError("tables differ in size")
        return CorrelatorTable(self.n, weight * self.values + (1 - weight) * other.values)


def correlator_table(test: IQPBellTest, mask=None, max_qubits: int | None = None) -> CorrelatorTable:
    """Correlators at all ``2**n`` settings; ``mask`` defaults to full parity."""
    mask = (1 << test.n) - 1 if mask is None else _bits.as_mask(mask, test.n)
    check_qubit_cap(test.n, max_qubits)
    values = ordered_map(lambda x: correlator(test, x, mask, max_qubits), range(1 << test.n))
    return CorrelatorTable(test.n, np.array(values))


def sample(dist: OutcomeDistribution, seed: int, count: int) -> list[str]:
    """``count`` i.i.d. outcome strings; the same seed gives the same stream."""
    if count < 1:
        raise InputShapeError("count must be at least 1")
    rng = np.random.default_rng(seed)
    cdf = np.cumsum(dist.probs)
    cdf[-1] = 1.0
    draws = np.searchsorted(cdf, rng.random(count), side="right")
    draws = np.minimum(draws, len(cdf) - 1)
    return [_bits.to_string(int(z), dist.n) for z in draws]
