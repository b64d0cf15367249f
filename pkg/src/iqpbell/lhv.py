"""Brute-force local-hidden-variable oracles.

Every classical bound in the package is computed here by enumerating
deterministic local strategies.  A party with one binary setting has exactly
four deterministic responses ``z(x) = a*x ^ b``; a party without a setting
has two.  All arithmetic is exact (ints and Fractions).
"""
from __future__ import annotations

import itertools
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from .expressions import (
    N_PARTIES,
    STATED_LIFTED_BOUND,
    SETTING_PAIRS,
    Interpretation,
    ghz_expression,
    ghz_setting,
    ghz_target,
    lifted_expression,
)
from .errors import ResourceError
from .simulator import CorrelatorTable

MAX_FULL_CORRELATION_N = 4
GHZ_SETTINGED = (False, False, True, True, True)


@dataclass(frozen=True)
class LHVStrategy:
    """Deterministic responses ``z_m = a_m x_m ^ b_m``.

    ``a_m`` is ``None`` for a party without a measurement setting.
    """

    a: tuple[int | None, ...]
    b: tuple[int, ...]

    def respond(self, party: int, setting: int) -> int:
        a = self.a[party]
        return ((a or 0) & setting) ^ self.b[party]

    def outcome(self, x: int) -> int:
        """Joint outcome index for setting index ``x`` (bit m = party m)."""
        return sum(self.respond(m, (x >> m) & 1) << m for m in range(len(self.b)))

    def to_dict(self) -> dict:
        return {"a": list(self.a), "b": list(self.b)}


@dataclass(frozen=True)
class AffineFunction:
    """``f(x) = (sum_m coeffs[m] x_m) ^ const`` over Z_2."""

    coeffs: tuple[int, ...]
    const: int

    def __call__(self, *x: int) -> int:
        acc = self.const
        for c, xi in zip(self.coeffs, x, strict=True):
            acc ^= c & xi
        return acc


def affine_functions(k: int) -> list[AffineFunction]:
    """All ``2**(k+1)`` affine maps ``Z_2^k -> Z_2``."""
    return [
        AffineFunction(tuple(c), b)
        for c in itertools.product((0, 1), repeat=k)
        for b in (0, 1)
    ]


def deterministic_strategies(settinged: Sequence[bool]):
    """Lexicographic in ``(a_m, b_m)`` per party, or ``b_m`` alone if settingless."""
    per_party = [
        [(a, b) for a in (0, 1) for b in (0, 1)] if s else [(None, b) for b in (0, 1)]
        for s in settinged
    ]
    for combo in itertools.product(*per_party):
        yield LHVStrategy(tuple(a for a, _ in combo), tuple(b for _, b in combo))


def induced_parity_function(strategy: LHVStrategy) -> AffineFunction:
    """Parity ``z3 ^ z4 ^ z5`` as a function of ``(x3, x4)`` once ``x5 = x3 ^ x4``."""
    a3, a4, a5 = (strategy.a[m] or 0 for m in (2, 3, 4))
    b = strategy.b[2] ^ strategy.b[3] ^ strategy.b[4]
    return AffineFunction((a3 ^ a5, a4 ^ a5), b)


def lhv_bound_ghz(target: Callable[[int, int], int] = ghz_target) -> int:
    """Max number of setting pairs on which an affine ``f`` equals ``target``."""
    return max(
        sum(f(x3, x4) == target(x3, x4) for x3, x4 in SETTING_PAIRS)
        for f in affine_functions(2)
    )


def strategy_behaviour(strategy: LHVStrategy):
    """Point-mass outcome statistics, in the form the expression evaluators take."""

    def behaviour(x3: int, x4: int):
        p = [Fraction(0)] * (1 << N_PARTIES)
        p[strategy.outcome(ghz_setting(x3, x4))] = Fraction(1)
        return p

    return behaviour


def mixture_behaviour(weights: Sequence[Fraction], strategies: Sequence[LHVStrategy]):
    """Shared-randomness mixture of deterministic strategies."""
    parts = [strategy_behaviour(s) for s in strategies]

    def behaviour(x3: int, x4: int):
        p = [Fraction(0)] * (1 << N_PARTIES)
        for w, part in zip(weights, parts):
            for z, q in enumerate(part(x3, x4)):
                if q:
                    p[z] += w * q
        return p

    return behaviour


def lhv_ghz_values() -> list[tuple[LHVStrategy, Fraction]]:
    """GHZ expression for each strategy with ``b1 = b2 = 0`` (the post-selected ones)."""
    out = []
    for s in deterministic_strategies(GHZ_SETTINGED):
        if s.b[0] == 0 and s.b[1] == 0:
            out.append((s, ghz_expression(strategy_behaviour(s))))
    return out


@dataclass(frozen=True)
class LiftedBound:
    bound: Fraction
    interpretation: Interpretation
    witness: LHVStrategy
    values: tuple[Fraction, ...]
    stated_bound: int = STATED_LIFTED_BOUND

    @property
    def strategy_count(self) -> int:
        return len(self.values)

    def to_dict(self) -> dict:
        return {
            "interpretation": self.interpretation.value,
            "classical_bound": str(self.bound),
            "stated_bound": self.stated_bound,
            "strategies": self.strategy_count,
            "witness_strategy": self.witness.to_dict(),
        }


def lhv_bound_lifted(interpretation=Interpretation.CONDITIONAL) -> LiftedBound:
    """Exhaustive maximum of the lifted expression over all 256 strategies.

    The witness is the first maximizer in enumeration order.
    """
    interpretation = Interpretation(interpretation)
    values = []
    best, witness = None, None
    for s in deterministic_strategies(GHZ_SETTINGED):
        v = Fraction(lifted_expression(strategy_behaviour(s), interpretation).value)
        values.append(v)
        if best is None or v > best:
            best, witness = v, s
    return LiftedBound(best, interpretation, witness, tuple(values))


def deterministic_table(strategy: LHVStrategy) -> list[int]:
    """Full correlator ``(-1)^{z_1 ^ ... ^ z_n}`` at every setting."""
    n = len(strategy.b)
    return [1 - 2 * (bin(strategy.outcome(x)).count("1") & 1) for x in range(1 << n)]


def naive_wwzb_total(table: Sequence) -> object:
    """``sum_a |sum_x (-1)^{a.x} E(x)|`` by direct double loop."""
    size = len(table)
    return sum(
        abs(sum(table[x] * (1 - 2 * (bin(a & x).count("1") & 1)) for x in range(size)))
        for a in range(size)
    )


def _check_cap(n: int) -> None:
    if not 1 <= n <= MAX_FULL_CORRELATION_N:
        raise ResourceError(
            f"full-correlation enumeration supports 1 <= n <= {MAX_FULL_CORRELATION_N}, got {n}"
        )


def lhv_bound_full_correlation(n: int) -> int:
    """Maximum WWZB total over deterministic strategies; each one must equal ``2**n``."""
    _check_cap(n)
    totals = {naive_wwzb_total(deterministic_table(s)) for s in deterministic_strategies([True] * n)}
    if totals != {1 << n}:
        raise RuntimeError(f"deterministic WWZB totals {sorted(totals)} != {{{1 << n}}}")
    return 1 << n


def wwzb_saturation_witness(n: int) -> CorrelatorTable:
    """Correlator table of the first deterministic strategy (all ``a = b = 0``)."""
    _check_cap(n)
    return CorrelatorTable(n, deterministic_table(next(deterministic_strategies([True] * n))))


__all__ = [
    "LHVStrategy",
    "AffineFunction",
    "affine_functions",
    "deterministic_strategies",
    "induced_parity_function",
    "lhv_bound_ghz",
    "lhv_ghz_values",
    "strategy_behaviour",
    "mixture_behaviour",
    "LiftedBound",
    "lhv_bound_lifted",
    "deterministic_table",
    "naive_wwzb_total",
    "lhv_bound_full_correlation",
    "wwzb_saturation_witness",
]
