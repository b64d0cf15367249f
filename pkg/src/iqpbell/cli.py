"""Command-line entry point.

Exit codes: 0 success / claim holds, 1 claim fails, 2 input error,
3 runtime error (impossible conditioning event, qubit cap).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__, _bits
from .circuit_io import load_circuit
from .errors import CircuitParseError, ImpossibleEventError, InputShapeError, ResourceError
from .expressions import Interpretation
from .gadgets import (
    GHZ_P_ANGLE,
    ghz_bell_test,
    postselected_ghz_state,
    select_ghz_convention,
    verify_ghz_gadget,
    verify_hadamard_gadget,
)
from .lhv import lhv_bound_ghz
from .nonlocality import (
    cosine_decomposition,
    ghz_bell_value,
    lifted_bell_value,
    marginal_decomposition,
    wwzb,
    wwzb_sweep,
)
from .phasepoly import Angle, IQPBellTest, IQPCircuit, realize
from .simulator import (
    DEFAULT_MAX_QUBITS,
    HARD_MAX_QUBITS,
    SAMPLER_ALGORITHM,
    check_qubit_cap,
    correlator_table,
    postselect,
    run_iqp,
    sample,
)

log = logging.getLogger("iqpbell")

EXIT_OK, EXIT_CLAIM_FAILS, EXIT_INPUT, EXIT_RUNTIME = 0, 1, 2, 3
TOL = 1e-9


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _config(args) -> dict:
    skip = {"func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _envelope(args, body: dict) -> dict:
    return {"tool": "iqpbell", "version": __version__, "seed": args.seed, "config": _config(args), **body}


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _parse_condition(text: str, measured: tuple[int, ...]):
    positions, values = [], []
    for item in filter(None, (s.strip() for s in text.split(","))):
        try:
            q, b = (int(v) for v in item.split("="))
        except ValueError:
            raise UsageError(f"--condition: cannot parse {item!r}, expected qubit=bit") from None
        if q not in measured:
            raise UsageError(f"--condition: qubit {q} is not measured")
        if b not in (0, 1):
            raise UsageError(f"--condition: bit for qubit {q} must be 0 or 1")
        positions.append(measured.index(q))
        values.append(b)
    if not positions:
        raise UsageError("--condition given without any qubit=bit pairs")
    return positions, values


def _load_runnable(args) -> IQPCircuit:
    obj = load_circuit(args.circuit)
    if isinstance(obj, IQPBellTest):
        setting = args.setting if args.setting is not None else "0" * obj.n
        return IQPCircuit(obj.n, realize(obj, setting))
    if args.setting is not None:
        raise UsageError("--setting only applies to Bell-test files (with input_angles)")
    return obj


def cmd_simulate(args) -> int:
    circuit = _load_runnable(args)
    dist = run_iqp(circuit, args.max_qubits)
    if args.condition:
        positions, values = _parse_condition(args.condition, dist.qubits)
        dist = postselect(dist, positions, values)
    if args.format == "csv":
        _emit(args, dist.to_csv())
    else:
        _emit(args, _dump(_envelope(args, {"experiment": "simulate", **dist.to_dict()})))
    return EXIT_OK


def cmd_ghz_demo(args) -> int:
    test = ghz_bell_test()
    if args.x_only:
        test = ghz_bell_test(GHZ_P_ANGLE, (Angle(0),) * 3)
    quantum = ghz_bell_value(test)
    classical = lhv_bound_ghz()
    full = wwzb(correlator_table(test))
    violation = quantum > classical + TOL
    body = {
        "experiment": "ghz-demo-x-only" if args.x_only else "ghz-demo",
        "n": test.n,
        "quantum_value": quantum,
        "classical_bound": classical,
        "wwzb_total": full.total,
        "wwzb_bound": full.bound,
        "violation": violation,
    }
    if args.lifted:
        body["lifted"] = [
            lifted_bell_value(test, i).to_dict() for i in (Interpretation.CONDITIONAL, Interpretation.JOINT)
        ]
    if args.format == "csv":
        rows = [["ghz", quantum, classical, violation]]
        for item in body.get("lifted", []):
            rows.append([f"lifted-{item['interpretation']}", item["quantum_value"], item["classical_bound_exact"], item["violation"]])
        _emit(args, _csv(["expression", "quantum_value", "classical_bound", "violation"], rows))
    else:
        _emit(args, _dump(_envelope(args, body)))
    return EXIT_OK if violation else EXIT_CLAIM_FAILS


def cmd_wwzb_sweep(args) -> int:
    if not 2 <= args.n_min <= args.n_max <= 6:
        raise UsageError("need 2 <= --n-min <= --n-max <= 6")
    check_qubit_cap(args.n_max, args.max_qubits)
    rows = wwzb_sweep(args.trials, args.seed, args.n_min, args.n_max, args.decompose)
    max_ratio = max(max(r.max_ratio, r.component_max_ratio) for r in rows)
    holds = max_ratio <= 1 + TOL
    if args.decompose:
        holds = holds and all(
            r.decomposition_error <= 1e-10 and abs(r.weight_sum - 1) <= 1e-10 and r.term_count == 1 << (r.n - 1)
            for r in rows
        )
    if args.format == "csv":
        records = [r.to_dict() for r in rows]
        header = list(records[0])
        _emit(args, _csv(header, [[rec[h] for h in header] for rec in records]))
    else:
        body = {
            "experiment": "wwzb-sweep",
            "trials": len(rows),
            "max_ratio": max_ratio,
            "claim_holds": holds,
            "rows": [r.to_dict() for r in rows],
        }
        _emit(args, _dump(_envelope(args, body)))
    return EXIT_OK if holds else EXIT_CLAIM_FAILS


def _terms_payload(terms):
    return [
        {"y": t.y, "weight": t.weight, "frequency": [float(f) for f in t.frequency], "offset": t.offset}
        for t in terms
    ]


def cmd_decompose(args) -> int:
    obj = load_circuit(args.circuit)
    if not isinstance(obj, IQPBellTest):
        raise UsageError("decompose needs a Bell-test file (with input_angles)")
    check_qubit_cap(obj.n, args.max_qubits)
    mask = (1 << obj.n) - 1 if args.mask is None else _bits.as_mask(
        [int(q) for q in args.mask.split(",") if q.strip()], obj.n
    )
    components = marginal_decomposition(obj, mask)
    payload = [
        {"weight": c.weight, "qubits": list(c.qubits), "terms": _terms_payload(cosine_decomposition(c.test))}
        for c in components
    ]
    if args.format == "csv":
        rows = []
        for ci, comp in enumerate(payload):
            for t in comp["terms"]:
                rows.append([ci, comp["weight"], t["y"], t["weight"], " ".join(map(repr, t["frequency"])), t["offset"]])
        _emit(args, _csv(["component", "component_weight", "y", "weight", "frequency", "offset"], rows))
    else:
        body = {"experiment": "decompose", "n": obj.n, "mask": _bits.to_string(mask, obj.n), "components": payload}
        _emit(args, _dump(_envelope(args, body)))
    return EXIT_OK


def cmd_gadget_verify(args) -> int:
    if args.gadget == "hadamard":
        report = verify_hadamard_gadget(args.trials, args.seed)
        ok = report.fidelity >= 1 - 1e-10 and abs(report.success_probability - 0.5) <= 1e-10
        body = {"experiment": "gadget-verify-hadamard", **report.to_dict()}
    else:
        chosen, candidates = select_ghz_convention()
        report = verify_ghz_gadget()
        branches = []
        for z1 in (0, 1):
            for z2 in (0, 1):
                _, prob = postselected_ghz_state(z1, z2)
                branches.append({"z1": z1, "z2": z2, "probability": prob})
        ok = chosen is not None and report.fidelity >= 1 - 1e-10 and abs(report.success_probability - 0.25) <= 1e-10
        body = {
            "experiment": "gadget-verify-ghz",
            **report.to_dict(),
            "chosen_convention": chosen.to_dict() if chosen else None,
            "candidates": [c.to_dict() for c in candidates],
            "branches": branches,
        }
    if args.format == "csv":
        _emit(args, _csv(["fidelity", "success_probability", "target"],
                         [[report.fidelity, report.success_probability, report.target_description]]))
    else:
        _emit(args, _dump(_envelope(args, body)))
    return EXIT_OK if ok else EXIT_CLAIM_FAILS


def cmd_sample(args) -> int:
    circuit = _load_runnable(args)
    dist = run_iqp(circuit, args.max_qubits)
    draws = sample(dist, args.seed, args.count)
    header = {
        "tool": "iqpbell",
        "version": __version__,
        "algorithm": SAMPLER_ALGORITHM,
        "seed": args.seed,
        "count": args.count,
        "qubits": list(dist.qubits),
    }
    _emit(args, json.dumps(header, sort_keys=True) + "\n" + "".join(d + "\n" for d in draws))
    return EXIT_OK


def _common(parser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--seed", type=int, default=d(0), help="64-bit RNG seed (default 0)")
    parser.add_argument("--format", choices=("json", "csv"), default=d("json"))
    parser.add_argument("--out", default=d(None), help="write report here instead of stdout")
    parser.add_argument("--max-qubits", type=int, default=d(DEFAULT_MAX_QUBITS),
                        help=f"qubit cap (default {DEFAULT_MAX_QUBITS}, at most {HARD_MAX_QUBITS})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="iqpbell", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        _common(p, suppress=True)
        p.set_defaults(func=func)
        return p

    p = add("simulate", cmd_simulate, "exact outcome distribution of a circuit file")
    p.add_argument("circuit")
    p.add_argument("--condition", help="post-select, e.g. 0=0,1=0 (qubit=bit)")
    p.add_argument("--setting", help="setting string for Bell-test files, qubit 0 first")

    p = add("ghz-demo", cmd_ghz_demo, "post-selected GHZ Bell violation")
    p.add_argument("--lifted", action="store_true", help="also evaluate the lifted expression")
    p.add_argument("--x-only", action="store_true", help="X measurements only (no violation expected)")

    p = add("wwzb-sweep", cmd_wwzb_sweep, "WWZB totals over seeded random IQP Bell tests")
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--decompose", action="store_true", help="also check cosine reconstruction")

    p = add("decompose", cmd_decompose, "cosine (and marginal) decomposition of a Bell test")
    p.add_argument("circuit")
    p.add_argument("--mask", help="comma-separated parity qubits (default all)")

    p = add("gadget-verify", cmd_gadget_verify, "verify the Hadamard or GHZ gadget")
    p.add_argument("gadget", choices=("hadamard", "ghz"))
    p.add_argument("--trials", type=int, default=100)

    p = add("sample", cmd_sample, "seeded samples from a circuit's output distribution")
    p.add_argument("circuit")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--setting", help="setting string for Bell-test files, qubit 0 first")
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(levelname)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.max_qubits > DEFAULT_MAX_QUBITS:
        log.warning(
            "qubit cap %d: a %d-qubit state vector needs %.0f MiB",
            args.max_qubits, args.max_qubits, (16 << args.max_qubits) / 2**20,
        )
    try:
        if args.max_qubits > HARD_MAX_QUBITS:
            raise ResourceError(f"--max-qubits {args.max_qubits} exceeds hard limit {HARD_MAX_QUBITS}")
        return args.func(args)
    except (CircuitParseError, InputShapeError, UsageError, FileNotFoundError) as exc:
        print(f"iqpbell: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ImpossibleEventError, ResourceError) as exc:
        print(f"iqpbell: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
