"""JSON circuit files.

Format (angles in units of pi)::

    {"n": 5,
     "terms": [{"support": [0, 2], "angle": {"num": 1, "den": 1}}, ...],
     "input_angles": [{"num": 0, "den": 1}, ...],   # optional: marks a Bell test
     "measured": [0, 1],                             # optional, default all
     "global_phase": {"num": 0, "den": 1}}           # optional

Unknown keys are rejected.
"""
from __future__ import annotations

import json
from pathlib import Path

from .errors import CircuitParseError, IQPBellError
from .phasepoly import Angle, DiagonalUnitary, IQPBellTest, IQPCircuit, PhaseTerm

_TOP_KEYS = {"n", "terms", "input_angles", "measured", "global_phase"}


def _int(value, where):
    if isinstance(value, bool) or not isinstance(value, int):
        raise CircuitParseError(f"expected an integer, got {value!r}", where)
    return value


def _list(value, where):
    if not isinstance(value, list):
        raise CircuitParseError(f"expected a list, got {type(value).__name__}", where)
    return value


def _angle(obj, where) -> Angle:
    if not isinstance(obj, dict):
        raise CircuitParseError("angle must be an object with 'num' and 'den'", where)
    extra = set(obj) - {"num", "den"}
    if extra:
        raise CircuitParseError(f"unknown key(s) {sorted(extra)}", where)
    if "num" not in obj:
        raise CircuitParseError("missing 'num'", where)
    num = _int(obj["num"], f"{where}.num")
    den = _int(obj.get("den", 1), f"{where}.den")
    if den == 0:
        raise CircuitParseError("zero denominator", f"{where}.den")
    return Angle(num, den)


def _qubit(value, n, where):
    q = _int(value, where)
    if not 0 <= q < n:
        raise CircuitParseError(f"qubit index {q} out of range for n={n}", where)
    return q


def from_dict(data) -> IQPCircuit | IQPBellTest:
    if not isinstance(data, dict):
        raise CircuitParseError("top level must be a JSON object", "$")
    extra = set(data) - _TOP_KEYS
    if extra:
        raise CircuitParseError(f"unknown key(s) {sorted(extra)}", "$")
    if "n" not in data:
        raise CircuitParseError("missing required key 'n'", "$")
    n = _int(data["n"], "n")
    if n < 1:
        raise CircuitParseError("n must be at least 1", "n")

    terms = []
    for i, t in enumerate(_list(data.get("terms", []), "terms")):
        where = f"terms[{i}]"
        if not isinstance(t, dict):
            raise CircuitParseError("term must be an object", where)
        extra = set(t) - {"support", "angle"}
        if extra:
            raise CircuitParseError(f"unknown key(s) {sorted(extra)}", where)
        if "support" not in t or "angle" not in t:
            raise CircuitParseError("term needs 'support' and 'angle'", where)
        support = [
            _qubit(q, n, f"{where}.support[{j}]")
            for j, q in enumerate(_list(t["support"], f"{where}.support"))
        ]
        if not support:
            raise CircuitParseError("empty support", f"{where}.support")
        terms.append(PhaseTerm(tuple(support), _angle(t["angle"], f"{where}.angle")))

    phase = _angle(data["global_phase"], "global_phase") if "global_phase" in data else Angle()
    unitary = DiagonalUnitary(n, tuple(terms), phase)

    if "input_angles" in data:
        if "measured" in data:
            raise CircuitParseError("a Bell test measures every qubit; drop 'measured'", "measured")
        raw = _list(data["input_angles"], "input_angles")
        if len(raw) != n:
            raise CircuitParseError(f"expected {n} input angles, got {len(raw)}", "input_angles")
        angles = tuple(_angle(a, f"input_angles[{i}]") for i, a in enumerate(raw))
        return IQPBellTest(n, unitary, angles)

    measured = None
    if "measured" in data:
        measured = tuple(
            _qubit(q, n, f"measured[{i}]") for i, q in enumerate(_list(data["measured"], "measured"))
        )
    return IQPCircuit(n, unitary, measured)


def parse_circuit(text: str) -> IQPCircuit | IQPBellTest:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CircuitParseError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None
    try:
        return from_dict(data)
    except CircuitParseError:
        raise
    except (IQPBellError, ValueError) as exc:
        raise CircuitParseError(str(exc), "$") from None


def _angle_json(a: Angle) -> dict:
    s = a.signed
    return {"num": s.numerator, "den": s.denominator}


def to_dict(obj: IQPCircuit | IQPBellTest) -> dict:
    unitary = obj.base_unitary if isinstance(obj, IQPBellTest) else obj.unitary
    out = {
        "n": obj.n,
        "terms": [{"support": list(t.support), "angle": _angle_json(t.angle)} for t in unitary.terms],
    }
    if not unitary.global_phase.is_zero():
        out["global_phase"] = _angle_json(unitary.global_phase)
    if isinstance(obj, IQPBellTest):
        out["input_angles"] = [_angle_json(a) for a in obj.input_angles]
    elif obj.measured != tuple(range(obj.n)):
        out["measured"] = list(obj.measured)
    return out


def serialize_circuit(obj: IQPCircuit | IQPBellTest, indent: int | None = 2) -> str:
    return json.dumps(to_dict(obj), indent=indent)


def load_circuit(path) -> IQPCircuit | IQPBellTest:
    return parse_circuit(Path(path).read_text(encoding="utf-8"))


def save_circuit(obj, path) -> None:
    Path(path).write_text(serialize_circuit(obj) + "\n", encoding="utf-8")
