import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from iqpbell.phasepoly import Angle, DiagonalUnitary, IQPBellTest, PhaseTerm

angles = st.builds(Angle, st.integers(-32, 32), st.sampled_from([1, 2, 4, 8]))


@st.composite
def unitaries(draw, n=None, max_n=4):
    n = draw(st.integers(1, max_n)) if n is None else n
    supports = [s for k in range(1, n + 1) for s in itertools.combinations(range(n), k)]
    picked = draw(st.lists(st.sampled_from(supports), max_size=3 * n))
    terms = tuple(PhaseTerm(s, draw(angles)) for s in picked)
    return DiagonalUnitary(n, terms)


@st.composite
def bell_tests(draw, max_n=4):
    u = draw(unitaries(max_n=max_n))
    thetas = tuple(draw(angles) for _ in range(u.n))
    return IQPBellTest(u.n, u, thetas)


def random_unitary(n, rng, max_terms=None):
    supports = [s for k in range(1, n + 1) for s in itertools.combinations(range(n), k)]
    count = int(rng.integers(0, (max_terms or 3 * n) + 1))
    terms = tuple(
        PhaseTerm(supports[int(rng.integers(len(supports)))], Angle(int(rng.integers(0, 16)), 8))
        for _ in range(count)
    )
    return DiagonalUnitary(n, terms)


def random_test(n, rng):
    return IQPBellTest(n, random_unitary(n, rng), tuple(Angle(int(rng.integers(0, 16)), 8) for _ in range(n)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
