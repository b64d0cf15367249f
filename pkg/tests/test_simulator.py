import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from iqpbell.errors import ImpossibleEventError, InputShapeError, ResourceError
from iqpbell.gadgets import ghz_gadget
from iqpbell.phasepoly import Angle, DiagonalUnitary, IQPBellTest, IQPCircuit, PhaseTerm, r_gate
from iqpbell.simulator import (
    CorrelatorTable,
    OutcomeDistribution,
    correlator,
    correlator_table,
    fwht,
    postselect,
    prepare_state,
    run_iqp,
    sample,
)

from conftest import bell_tests, random_test, random_unitary, unitaries
from oracles import dense_correlator, dense_marginal, dense_unitary, dense_x_probs, naive_wht, bits_of


class TestFWHT:
    def test_delta(self):
        assert fwht(np.array([1, 0, 0, 0])).tolist() == [1, 1, 1, 1]

    def test_constant(self):
        assert fwht(np.array([1, 1, 1, 1])).tolist() == [4, 0, 0, 0]

    def test_matches_naive_1024(self, rng):
        v = rng.normal(size=1024) + 1j * rng.normal(size=1024)
        assert np.allclose(fwht(v), naive_wht(v), atol=1e-12, rtol=0)

    def test_involution_up_to_scale(self, rng):
        v = rng.normal(size=256)
        assert np.allclose(fwht(fwht(v)), 256 * v, atol=1e-10)

    def test_inplace(self):
        v = np.array([1.0, 2.0, 3.0, 4.0])
        out = fwht(v, inplace=True)
        assert out is v
        assert v.tolist() == [10.0, -2.0, -4.0, 0.0]

    def test_not_inplace_leaves_input(self):
        v = np.array([1.0, 2.0])
        fwht(v)
        assert v.tolist() == [1.0, 2.0]

    def test_integer_exact(self):
        out = fwht(np.array([3, -1, 2, 5], dtype=np.int64))
        assert out.dtype == np.int64
        assert out.tolist() == naive_wht([3, -1, 2, 5]).tolist()

    @pytest.mark.parametrize("size", [0, 3, 6, 1000])
    def test_bad_length(self, size):
        with pytest.raises(InputShapeError):
            fwht(np.zeros(size))


class TestRunIQP:
    def test_identity(self):
        d = run_iqp(IQPCircuit(3, DiagonalUnitary(3)))
        assert d.probability("000") == pytest.approx(1.0, abs=1e-15)

    def test_z_flips_plus(self):
        d = run_iqp(IQPCircuit(1, DiagonalUnitary(1, (r_gate(0, Angle(1)),))))
        assert d.probability("1") == pytest.approx(1.0, abs=1e-15)

    def test_ghz_gadget_matches_dense(self):
        c = ghz_gadget()
        d = run_iqp(c)
        assert np.allclose(d.probs, dense_x_probs(dense_unitary(c.unitary), 5), atol=1e-12, rtol=0)

    @settings(max_examples=60, deadline=None)
    @given(unitaries(max_n=6), st.data())
    def test_matches_dense_with_marginals(self, u, data):
        measured = data.draw(st.lists(st.integers(0, u.n - 1), min_size=1, unique=True))
        d = run_iqp(IQPCircuit(u.n, u, tuple(measured)))
        ref = dense_marginal(dense_x_probs(dense_unitary(u), u.n), u.n, sorted(measured))
        assert np.allclose(d.probs, ref, atol=1e-12, rtol=0)
        assert d.qubits == tuple(sorted(measured))
        assert abs(d.probs.sum() - 1) <= 1e-10

    def test_global_phase_irrelevant(self, rng):
        u = random_unitary(4, rng)
        shifted = DiagonalUnitary(4, u.terms, Angle(3, 8))
        assert np.allclose(run_iqp(IQPCircuit(4, u)).probs, run_iqp(IQPCircuit(4, shifted)).probs, atol=1e-12, rtol=0)

    def test_cap(self):
        with pytest.raises(ResourceError):
            run_iqp(IQPCircuit(21, DiagonalUnitary(21)))
        with pytest.raises(ResourceError):
            run_iqp(IQPCircuit(3, DiagonalUnitary(3)), max_qubits=25)

    def test_state_normalized(self, rng):
        assert prepare_state(random_unitary(5, rng)).is_normalized()


class TestPostselect:
    def test_certain_event_unchanged(self):
        d = run_iqp(IQPCircuit(2, DiagonalUnitary(2)))
        out = postselect(d, [0], [0])
        assert np.array_equal(out.probs, d.probs)
        assert out.success_probability == 1.0

    def test_ghz_gadget_quarter(self):
        d = postselect(run_iqp(ghz_gadget()), [0, 1], [0, 0])
        assert d.success_probability == pytest.approx(0.25, abs=1e-10)

    def test_uniform_two_bit(self):
        d = OutcomeDistribution(2, np.full(4, 0.25))
        out = postselect(d, [0], [1])
        assert out.probability("10") == pytest.approx(0.5)
        assert out.probability("11") == pytest.approx(0.5)
        assert out.probability("00") == 0
        assert out.success_probability == pytest.approx(0.5)

    def test_repeated_conditioning_multiplies(self):
        d = OutcomeDistribution(2, np.full(4, 0.25))
        out = postselect(postselect(d, [0], [1]), [1], [0])
        assert out.success_probability == pytest.approx(0.25)
        assert out.probability("10") == pytest.approx(1.0)

    def test_impossible(self):
        d = run_iqp(IQPCircuit(2, DiagonalUnitary(2)))
        with pytest.raises(ImpossibleEventError):
            postselect(d, [0], [1])

    def test_empty_mask(self):
        with pytest.raises(InputShapeError):
            postselect(OutcomeDistribution(1, np.array([0.5, 0.5])), [], [])

    def test_tiny_probabilities_clamped(self):
        d = OutcomeDistribution(1, np.array([1.0, 1e-14]))
        assert d.probs[1] == 0.0


class TestCorrelator:
    def test_identity_all_ones(self):
        t = IQPBellTest(3, DiagonalUnitary(3), (Angle(0),) * 3)
        assert np.allclose(correlator_table(t).values, 1.0)

    def test_single_qubit_s_gate(self):
        # <+| S^dag X S |+> = cos(pi/2) = 0
        t = IQPBellTest(1, DiagonalUnitary(1, (r_gate(0, Angle(1, 2)),)), (Angle(0),))
        assert correlator(t, "0", [0]) == pytest.approx(0.0, abs=1e-15)

    def test_random_three_qubit_matches_dense(self, rng):
        for _ in range(10):
            t = random_test(3, rng)
            for x in range(8):
                for mask in range(1, 8):
                    qs = [q for q in range(3) if (mask >> q) & 1]
                    ref = dense_correlator(t, bits_of(x, 3), qs)
                    assert correlator(t, x, mask) == pytest.approx(ref, abs=1e-12)

    @settings(max_examples=30, deadline=None)
    @given(bell_tests())
    def test_table_in_range(self, t):
        v = correlator_table(t).values
        assert np.all(np.abs(v) <= 1 + 1e-10)

    def test_empty_mask(self):
        t = IQPBellTest(1, DiagonalUnitary(1), (Angle(0),))
        with pytest.raises(InputShapeError):
            correlator(t, 0, 0)

    def test_global_phase_invariance(self, rng):
        t = random_test(3, rng)
        shifted = IQPBellTest(3, DiagonalUnitary(3, t.base_unitary.terms, Angle(5, 8)), t.input_angles)
        assert np.allclose(correlator_table(t).values, correlator_table(shifted).values, atol=1e-12, rtol=0)

    def test_table_ordering(self, rng):
        t = random_test(3, rng)
        tab = correlator_table(t, [0, 2])
        for x in range(8):
            assert tab.values[x] == correlator(t, x, [0, 2])

    def test_threaded_table_identical(self, rng, monkeypatch):
        t = random_test(4, rng)
        serial = correlator_table(t).values
        monkeypatch.setenv("IQPBELL_THREADS", "4")
        assert np.array_equal(correlator_table(t).values, serial)

    def test_table_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            CorrelatorTable(1, np.array([1.5, 0.0]))


class TestSample:
    def test_deterministic_distribution(self):
        d = run_iqp(IQPCircuit(2, DiagonalUnitary(2, (r_gate(1, Angle(1)),))))
        assert set(sample(d, 3, 50)) == {"01"}

    def test_same_seed_same_stream(self):
        d = run_iqp(ghz_gadget())
        assert sample(d, 7, 100) == sample(d, 7, 100)
        assert sample(d, 7, 100) != sample(d, 8, 100)

    def test_chi_square(self):
        d = run_iqp(ghz_gadget())
        draws = sample(d, 12345, 100_000)
        counts = np.zeros(32)
        for s in draws:
            counts[int(s[::-1], 2)] += 1
        support = d.probs > 0
        assert counts[~support].sum() == 0
        result = stats.chisquare(counts[support], 100_000 * d.probs[support])
        assert result.pvalue > 0.001

    def test_count_validation(self):
        with pytest.raises(InputShapeError):
            sample(OutcomeDistribution(1, np.array([1.0, 0.0])), 0, 0)


def test_report_formats():
    d = run_iqp(IQPCircuit(1, DiagonalUnitary(1)))
    rep = d.to_dict()
    assert rep["probs"] == [1.0, 0.0] and rep["success_probability"] == 1.0 and rep["n"] == 1
    assert d.to_csv().splitlines() == ["z,probability", "0,1.0", "1,0.0"]


def test_marginal_bit_order():
    # Z on qubit 2 only: qubit 2 always reads 1
    u = DiagonalUnitary(3, (r_gate(2, Angle(1)),))
    d = run_iqp(IQPCircuit(3, u, (0, 2)))
    assert d.probability("01") == pytest.approx(1.0)
    assert math.isclose(d.probs.sum(), 1.0)
