import json

import pytest
from hypothesis import given, settings

from iqpbell.circuit_io import load_circuit, parse_circuit, save_circuit, serialize_circuit
from iqpbell.errors import CircuitParseError
from iqpbell.gadgets import ghz_bell_test, ghz_gadget
from iqpbell.phasepoly import Angle, DiagonalUnitary, IQPBellTest, IQPCircuit, PhaseTerm

from conftest import bell_tests, unitaries


def test_ghz_gadget_round_trip():
    c = ghz_gadget()
    assert parse_circuit(serialize_circuit(c)) == c


def test_bell_test_round_trip():
    t = ghz_bell_test()
    back = parse_circuit(serialize_circuit(t))
    assert isinstance(back, IQPBellTest)
    assert back == t


def test_empty_terms_is_identity():
    c = parse_circuit('{"n": 3, "terms": []}')
    assert c == IQPCircuit(3, DiagonalUnitary(3))
    assert parse_circuit('{"n": 2}').unitary.terms == ()


def test_angle_normalization():
    c = parse_circuit('{"n": 1, "terms": [{"support": [0], "angle": {"num": 3, "den": 2}}]}')
    assert c.unitary.terms[0].angle == Angle(-1, 2)
    out = json.loads(serialize_circuit(c))
    assert out["terms"][0]["angle"] == {"num": -1, "den": 2}


def test_duplicate_supports_merge():
    text = json.dumps({
        "n": 2,
        "terms": [
            {"support": [0, 1], "angle": {"num": 1, "den": 2}},
            {"support": [1, 0], "angle": {"num": 1, "den": 2}},
        ],
    })
    assert parse_circuit(text).unitary.terms == (PhaseTerm((0, 1), Angle(1)),)


def test_measured_subset_round_trip():
    c = IQPCircuit(3, DiagonalUnitary(3), (2, 0))
    back = parse_circuit(serialize_circuit(c))
    assert back.measured == (0, 2)


def test_global_phase_round_trip():
    u = DiagonalUnitary(1, (), Angle(1, 4))
    assert parse_circuit(serialize_circuit(IQPCircuit(1, u))).unitary == u


@settings(max_examples=40, deadline=None)
@given(unitaries())
def test_round_trip_property(u):
    c = IQPCircuit(u.n, u)
    assert parse_circuit(serialize_circuit(c)) == c


@settings(max_examples=40, deadline=None)
@given(bell_tests())
def test_round_trip_bell_property(t):
    assert parse_circuit(serialize_circuit(t)) == t


@pytest.mark.parametrize(
    "text, where",
    [
        ('{"n": 2, "terms": [{"support": [0, 2], "angle": {"num": 1, "den": 1}}]}', "terms[0].support[1]"),
        ('{"n": 2, "terms": [{"support": [0], "angle": {"num": 1, "den": 0}}]}', "terms[0].angle.den"),
        ('{"n": 2, "colour": "red"}', "$"),
        ('{"n": 2, "terms": [{"support": [], "angle": {"num": 1}}]}', "terms[0].support"),
        ('{"n": 2, "terms": [{"support": [0], "angle": {"num": "x"}}]}', "terms[0].angle.num"),
        ('{"n": 2, "input_angles": [{"num": 0}]}', "input_angles"),
        ('{"n": 2, "measured": [3]}', "measured[0]"),
        ('{"terms": []}', "$"),
        ('{"n": 2, "terms": [{"support": [0], "angle": {"num": 1}, "extra": 1}]}', "terms[0]"),
    ],
)
def test_malformed_reports_location(text, where):
    with pytest.raises(CircuitParseError) as info:
        parse_circuit(text)
    assert info.value.location == where


def test_syntax_error_reports_line():
    with pytest.raises(CircuitParseError) as info:
        parse_circuit('{\n "n": 2,\n "terms": [\n}')
    assert info.value.location.startswith("line 4")


def test_file_helpers(tmp_path):
    path = tmp_path / "ghz5.json"
    save_circuit(ghz_gadget(), path)
    assert load_circuit(path) == ghz_gadget()
