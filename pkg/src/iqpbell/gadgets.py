"""Post-selection gadgets: Hadamard teleportation and GHZ preparation.

GHZ gadget, 0-based qubits: controlled-Z on ``{0,2}, {0,3}, {1,3}, {1,4}``
followed by a diagonal gate ``P`` on qubit 4.  Qubits 0 and 1 are measured
in the X basis; conditioning on both outcomes being 0 leaves qubits 2-4 in
``(|000> - |111>)/sqrt(2)`` when ``P = Z``.

Convention for the GHZ Bell test (fixed by :func:`select_ghz_convention`):

* ``P = R(pi)``.  ``R(+-pi/2)`` leaves ``|000> +- i|111>`` behind, which
  gives a zero correlator at the all-X setting, so no parity relation can be
  deterministic.
* Parties on qubits 2 and 3 apply ``R(-pi/2)`` before their X measurement
  when their setting bit is 1, so outcome 0 means ``|i>``.  The party on
  qubit 4 applies ``R(+pi/2)``, so outcome 0 means ``|-i>``.  With a single
  shared sign the parity at ``x5 = x3 ^ x4`` is ``x3 OR x4`` up to a
  constant, never ``NOT(x3 AND x4)``.
"""
from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass

import numpy as np

from .expressions import conditional_successes, quantum_behaviour
from .errors import InputShapeError
from .phasepoly import Angle, DiagonalUnitary, IQPBellTest, IQPCircuit, PhaseTerm, cz
from .simulator import prepare_state

GHZ_EDGES = ((0, 2), (0, 3), (1, 3), (1, 4))
GHZ_P_ANGLE = Angle(1)
GHZ_Y_ANGLES = (Angle(-1, 2), Angle(-1, 2), Angle(1, 2))

_PLUS = np.array([1.0, 1.0]) / np.sqrt(2)
_MINUS = np.array([1.0, -1.0]) / np.sqrt(2)
_H = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2)


@dataclass(frozen=True)
class GadgetReport:
    fidelity: float
    success_probability: float
    target_description: str

    def __post_init__(self):
        for name in ("fidelity", "success_probability"):
            v = getattr(self, name)
            if not -1e-12 <= v <= 1 + 1e-12:
                raise ValueError(f"{name}={v} outside [0, 1]")

    def to_dict(self) -> dict:
        return asdict(self)


def hadamard_gadget_apply(psi) -> tuple[np.ndarray, float]:
    """Teleport ``psi`` through a controlled-Z onto a ``|+>`` ancilla.

    The qubit carrying ``psi`` is projected onto ``<+|``; the ancilla is left
    in ``H|psi>``.  Returns ``(ancilla_state, success_probability)``.
    """
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (2,):
        raise InputShapeError("psi must be a single-qubit state vector")
    if abs(np.vdot(psi, psi).real - 1.0) > 1e-10:
        raise ValueError("psi must be normalized")
    # joint[q_psi, q_anc] after CZ
    joint = np.outer(psi, _PLUS) * np.array([[1, 1], [1, -1]])
    out = _PLUS @ joint
    success = float(np.vdot(out, out).real)
    return out / np.sqrt(success), success


def fidelity(a, b) -> float:
    return float(abs(np.vdot(a, b)) ** 2)


def random_qubit_states(count: int, rng) -> np.ndarray:
    """Haar-random single-qubit states, one per row."""
    v = rng.normal(size=(count, 2)) + 1j * rng.normal(size=(count, 2))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def verify_hadamard_gadget(trials: int = 100, seed: int = 0) -> GadgetReport:
    """Worst-case fidelity and success probability over random inputs."""
    rng = np.random.default_rng(seed)
    worst_fid, worst_success = 1.0, 0.5
    for psi in random_qubit_states(trials, rng):
        out, success = hadamard_gadget_apply(psi)
        f = fidelity(_H @ psi, out)
        worst_fid = min(worst_fid, f)
        if abs(success - 0.5) > abs(worst_success - 0.5):
            worst_success = success
    return GadgetReport(worst_fid, worst_success, f"H|psi> over {trials} random states")


def ghz_unitary(p_angle: Angle = GHZ_P_ANGLE) -> DiagonalUnitary:
    terms = [cz(a, b) for a, b in GHZ_EDGES] + [PhaseTerm((4,), p_angle)]
    return DiagonalUnitary(5, tuple(terms))


def ghz_gadget(p_angle: Angle = GHZ_P_ANGLE) -> IQPCircuit:
    return IQPCircuit(5, ghz_unitary(p_angle))


def ghz_bell_test(p_angle: Angle = GHZ_P_ANGLE, y_angles=GHZ_Y_ANGLES) -> IQPBellTest:
    """Five-party test: parties on qubits 0, 1 have no setting dependence."""
    if len(y_angles) != 3:
        raise InputShapeError("need one Y-measurement angle for each of qubits 2, 3, 4")
    return IQPBellTest(5, ghz_unitary(p_angle), (Angle(0), Angle(0), *y_angles))


def postselected_ghz_state(z1: int = 0, z2: int = 0, p_angle: Angle = GHZ_P_ANGLE):
    """State of qubits 2-4 after X outcomes ``(z1, z2)`` on qubits 0, 1.

    Returns ``(state, probability)``; the state is an 8-vector indexed with
    qubit 2 as the least significant bit.
    """
    t = prepare_state(ghz_unitary(p_angle)).tensor()  # axis k = qubit k
    b1 = _PLUS if z1 == 0 else _MINUS
    b2 = _PLUS if z2 == 0 else _MINUS
    rest = np.einsum("i,j,ijklm->klm", b1.conj(), b2.conj(), t)
    # back to little-endian flat index: axis order (q4, q3, q2)
    flat = rest.transpose(2, 1, 0).reshape(-1)
    prob = float(np.vdot(flat, flat).real)
    return flat / np.sqrt(prob), prob


GHZ_TARGET = np.zeros(8, dtype=complex)
GHZ_TARGET[0], GHZ_TARGET[7] = 1 / np.sqrt(2), -1 / np.sqrt(2)


def verify_ghz_gadget(p_angle: Angle = GHZ_P_ANGLE) -> GadgetReport:
    state, prob = postselected_ghz_state(0, 0, p_angle)
    return GadgetReport(
        fidelity(GHZ_TARGET, state),
        prob,
        "(|000> - |111>)/sqrt(2) on qubits 2-4 given X outcomes 0, 0 on qubits 0, 1",
    )


def single_qubit_reduced(state: np.ndarray, qubit: int) -> np.ndarray:
    """Reduced density matrix of one qubit of a 3-qubit little-endian state."""
    t = state.reshape(2, 2, 2)  # axis k holds local qubit 2 - k
    axis = 2 - qubit
    t = np.moveaxis(t, axis, 0).reshape(2, 4)
    return t @ t.conj().T


def ghz_relation_holds(test: IQPBellTest, tol: float = 1e-10) -> bool:
    """Whether post-selected parity equals ``x3 x4 ^ 1`` with certainty."""
    return all(abs(p - 1.0) <= tol for p in conditional_successes(quantum_behaviour(test)))


@dataclass(frozen=True)
class ConventionCandidate:
    p_angle: Angle
    y_angles: tuple[Angle, Angle, Angle]
    relation_holds: bool
    ghz_fidelity: float

    @property
    def accepted(self) -> bool:
        return self.relation_holds and self.ghz_fidelity >= 1 - 1e-10

    def to_dict(self) -> dict:
        return {
            "P": str(self.p_angle),
            "input_angles_q2_q3_q4": [str(a) for a in self.y_angles],
            "relation_holds": self.relation_holds,
            "ghz_fidelity": self.ghz_fidelity,
            "accepted": self.accepted,
        }


def _sign_patterns():
    patterns = list(itertools.product((-1, 1), repeat=3))
    patterns.sort(key=lambda s: (s.count(1), [-v for v in s]))
    return patterns


def select_ghz_convention() -> tuple[ConventionCandidate | None, list[ConventionCandidate]]:
    """Scan ``P`` in multiples of pi/2 and Y-measurement signs for qubits 2-4.

    Candidates are ordered with ``P`` ascending and, within that, sign
    patterns using the fewest ``R(+pi/2)``.  The chosen convention is the
    first one under which the post-selected parity relation holds
    deterministically and the conditioned state is the target GHZ state.
    """
    candidates = []
    for k in range(4):
        p = Angle(k, 2)
        fid = verify_ghz_gadget(p).fidelity
        for signs in _sign_patterns():
            ys = tuple(Angle(s, 2) for s in signs)
            holds = ghz_relation_holds(ghz_bell_test(p, ys))
            candidates.append(ConventionCandidate(p, ys, holds, fid))
    chosen = next((c for c in candidates if c.accepted), None)
    return chosen, candidates


__all__ = [
    "GadgetReport",
    "hadamard_gadget_apply",
    "verify_hadamard_gadget",
    "ghz_gadget",
    "ghz_unitary",
    "ghz_bell_test",
    "postselected_ghz_state",
    "verify_ghz_gadget",
    "ghz_relation_holds",
    "select_ghz_convention",
]
