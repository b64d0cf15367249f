import json

import pytest

from iqpbell.circuit_io import save_circuit
from iqpbell.cli import main
from iqpbell.gadgets import ghz_bell_test, ghz_gadget


@pytest.fixture
def ghz_file(tmp_path):
    path = tmp_path / "ghz5.json"
    save_circuit(ghz_gadget(), path)
    return path


@pytest.fixture
def bell_file(tmp_path):
    path = tmp_path / "ghztest.json"
    save_circuit(ghz_bell_test(), path)
    return path


def run(capsys, *argv):
    code = main(list(map(str, argv)))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_simulate_postselected(capsys, ghz_file):
    code, out, _ = run(capsys, "simulate", ghz_file, "--condition", "0=0,1=0")
    rep = json.loads(out)
    assert code == 0
    assert rep["success_probability"] == pytest.approx(0.25, abs=1e-10)
    assert rep["tool"] == "iqpbell" and rep["config"]["condition"] == "0=0,1=0"


def test_simulate_csv(capsys, ghz_file):
    code, out, _ = run(capsys, "--format", "csv", "simulate", ghz_file)
    lines = out.splitlines()
    assert code == 0 and lines[0] == "z,probability" and len(lines) == 33


def test_simulate_setting(capsys, bell_file):
    code, out, _ = run(capsys, "simulate", bell_file, "--setting", "00101")
    assert code == 0 and json.loads(out)["n"] == 5


def test_ghz_demo(capsys):
    code, out, _ = run(capsys, "ghz-demo", "--lifted")
    rep = json.loads(out)
    assert code == 0
    assert rep["quantum_value"] == pytest.approx(4.0, abs=1e-9)
    assert rep["classical_bound"] == 3
    lifted = {item["interpretation"]: item for item in rep["lifted"]}
    assert lifted["conditional"]["quantum_value"] == pytest.approx(16.0, abs=1e-9)


def test_ghz_demo_x_only_fails_claim(capsys):
    code, out, _ = run(capsys, "ghz-demo", "--x-only")
    assert code == 1 and json.loads(out)["violation"] is False


def test_sweep_deterministic(capsys, tmp_path):
    _, first, _ = run(capsys, "--seed", "9", "wwzb-sweep", "--trials", "10", "--decompose")
    _, second, _ = run(capsys, "wwzb-sweep", "--trials", "10", "--decompose", "--seed", "9")
    assert first.encode() == second.encode()
    rep = json.loads(first)
    assert rep["seed"] == 9 and rep["trials"] == 10 and rep["claim_holds"]
    out = tmp_path / "r.json"
    assert main(["--seed", "9", "wwzb-sweep", "--trials", "10", "--decompose", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["rows"] == rep["rows"]


def test_sweep_bad_range(capsys):
    code, _, err = run(capsys, "wwzb-sweep", "--n-max", "7")
    assert code == 2 and "n-max" in err


def test_decompose(capsys, bell_file):
    code, out, _ = run(capsys, "decompose", bell_file, "--mask", "2,3,4")
    rep = json.loads(out)
    assert code == 0 and len(rep["components"]) == 4
    assert all(len(c["terms"]) == 4 for c in rep["components"])


def test_decompose_needs_bell_file(capsys, ghz_file):
    assert run(capsys, "decompose", ghz_file)[0] == 2


@pytest.mark.parametrize("gadget", ["hadamard", "ghz"])
def test_gadget_verify(capsys, gadget):
    code, out, _ = run(capsys, "gadget-verify", gadget)
    assert code == 0 and json.loads(out)["fidelity"] >= 1 - 1e-10


def test_sample_reproducible(capsys, ghz_file):
    _, first, _ = run(capsys, "sample", ghz_file, "--count", "20", "--seed", "4")
    _, second, _ = run(capsys, "--seed", "4", "sample", ghz_file, "--count", "20")
    assert first == second
    lines = first.splitlines()
    assert json.loads(lines[0])["count"] == 20 and len(lines) == 21


def test_parse_error_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 2, "terms": [{"support": [5], "angle": {"num": 1}}]}')
    code, _, err = run(capsys, "simulate", bad)
    assert code == 2 and "terms[0].support[0]" in err


def test_missing_file(capsys, tmp_path):
    assert run(capsys, "simulate", tmp_path / "nope.json")[0] == 2


def test_impossible_condition(capsys, tmp_path):
    path = tmp_path / "id.json"
    path.write_text('{"n": 2, "terms": []}')
    assert run(capsys, "simulate", path, "--condition", "0=1")[0] == 3


def test_bad_condition_syntax(capsys, ghz_file):
    assert run(capsys, "simulate", ghz_file, "--condition", "zero")[0] == 2


def test_qubit_caps(capsys, ghz_file):
    code, _, err = run(capsys, "--max-qubits", "30", "simulate", ghz_file)
    assert code == 3 and "hard limit" in err
    code, _, _ = run(capsys, "simulate", ghz_file, "--max-qubits", "4")
    assert code == 3
