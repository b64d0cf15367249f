"""Evaluators for the two post-selected GHZ Bell expressions.

Both expressions are evaluated from a *behaviour*: a callable mapping the
free settings ``(x3, x4)`` to a length-32 sequence of outcome probabilities
over five parties (party ``m`` is bit ``m - 1``).  Parties 1 and 2 have no
setting and party 5 uses ``x5 = x3 ^ x4``.  The evaluators only add and
divide, so a behaviour returning :class:`fractions.Fraction` values gives an
exact result and one returning floats gives a float.
"""
from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from enum import Enum

from .errors import ImpossibleEventError
from .phasepoly import IQPBellTest, IQPCircuit, realize
from .simulator import CLAMP_FLOOR, run_iqp

N_PARTIES = 5
SETTING_PAIRS = ((0, 0), (0, 1), (1, 0), (1, 1))
STATED_LIFTED_BOUND = 11

Behaviour = Callable[[int, int], Sequence]


class Interpretation(str, Enum):
    """How the lifted expression turns outcome statistics into a number.

    ``CONDITIONAL`` sums ``Pr(bracket = 0 | z1, z2)`` over all four values of
    ``(z1, z2)``.  ``JOINT`` sums ``Pr(bracket = 0, z1, z2)`` instead.
    """

    CONDITIONAL = "conditional"
    JOINT = "joint"


def ghz_setting(x3: int, x4: int) -> int:
    """Setting index (bit m-1 = party m) with ``x5 = x3 ^ x4``."""
    return (x3 << 2) | (x4 << 3) | ((x3 ^ x4) << 4)


def ghz_target(x3: int, x4: int) -> int:
    return (x3 & x4) ^ 1


def _parity345(z: int) -> int:
    return ((z >> 2) ^ (z >> 3) ^ (z >> 4)) & 1


def _front(z: int) -> tuple[int, int]:
    return z & 1, (z >> 1) & 1


def conditional_successes(behaviour: Behaviour) -> list:
    """``Pr(z3^z4^z5 = x3 x4 ^ 1 | z1 = z2 = 0)`` for each setting pair."""
    out = []
    for x3, x4 in SETTING_PAIRS:
        p = behaviour(x3, x4)
        cond = sum(p[z] for z in range(32) if _front(z) == (0, 0))
        if cond < CLAMP_FLOOR:
            raise ImpossibleEventError(f"z1=z2=0 has probability {float(cond):.3g} at x3={x3}, x4={x4}")
        hit = sum(p[z] for z in range(32) if _front(z) == (0, 0) and _parity345(z) == ghz_target(x3, x4))
        out.append(hit / cond)
    return out


def ghz_expression(behaviour: Behaviour):
    """Sum over ``(x3, x4)`` of the post-selected success probability."""
    return sum(conditional_successes(behaviour))


@dataclass
class LiftedValue:
    value: object
    interpretation: Interpretation
    # (z1, z2, x3, x4) cells whose conditioning event had zero probability
    vacuous: list = field(default_factory=list)
    excluded: list = field(default_factory=list)


def lifted_expression(behaviour: Behaviour, interpretation=Interpretation.CONDITIONAL) -> LiftedValue:
    """Sum over ``z1, z2, x3, x4`` of ``Pr(not z1 * not z2 * [z ^ x3 x4 ^ 1] = 0 | z1, z2)``.

    Under the conditional reading a zero-probability ``(z1, z2)`` counts as 1
    when ``not z1 * not z2 = 0`` (the bracket is satisfied whatever happens)
    and is otherwise excluded; both cases are listed on the result.
    """
    interpretation = Interpretation(interpretation)
    result = LiftedValue(0, interpretation)
    total = 0
    for x3, x4 in SETTING_PAIRS:
        p = behaviour(x3, x4)
        for z1 in (0, 1):
            for z2 in (0, 1):
                gate = (1 - z1) * (1 - z2)
                cell = [z for z in range(32) if _front(z) == (z1, z2)]
                good = sum(
                    p[z] for z in cell if gate * (_parity345(z) ^ (x3 & x4) ^ 1) == 0
                )
                if interpretation is Interpretation.JOINT:
                    total += good
                    continue
                cond = sum(p[z] for z in cell)
                if cond < CLAMP_FLOOR:
                    if gate == 0:
                        total += 1
                        result.vacuous.append((z1, z2, x3, x4))
                    else:
                        result.excluded.append((z1, z2, x3, x4))
                    continue
                total += good / cond
    result.value = total
    return result


def quantum_behaviour(test: IQPBellTest) -> Behaviour:
    """Exact outcome statistics of a 5-qubit GHZ-style Bell test."""
    if test.n != N_PARTIES:
        raise ValueError(f"GHZ expressions need a {N_PARTIES}-qubit test, got n={test.n}")
    cache: dict[tuple[int, int], Sequence] = {}

    def behaviour(x3: int, x4: int):
        key = (x3, x4)
        if key not in cache:
            circuit = IQPCircuit(N_PARTIES, realize(test, ghz_setting(x3, x4)))
            cache[key] = run_iqp(circuit).probs
        return cache[key]

    return behaviour
