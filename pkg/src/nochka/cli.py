"""Command-line front end.

Subcommands map one-to-one onto library operations; every run is
deterministic given its inputs and seed.  Exit codes: 0 ok, 2 parse or
usage error, 3 resource budget exceeded, 4 a mathematical check failed.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import bounds as bounds_mod
from .curves import parse_coordinate, parse_curve
from .errors import ParseError, ResourceBudgetError, VerificationError
from .fixtures import generate_intro_fixture
from .geometry import (check_subgeneral_position, codim_oracle, format_arrangement,
                       hilbert_function, hilbert_weight, parse_arrangement)
from .nevanlinna import cartan_ru_check, jensen_check, smt_report, wronskian_divisor_check
from .rank_core import (build_filtration, format_oracle, greedy_select,
                        nochka_weights, parse_oracle, validate_rank_oracle)

SCHEMA = "nochka-report/1"


def _jsonable(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    raise TypeError(f"not JSON-serializable: {type(value).__name__}")


def _emit(payload: dict, fmt: str) -> None:
    if fmt == "tsv":
        if "tsv" in payload:
            sys.stdout.write(payload["tsv"])
            return
        for key, value in payload.items():
            if key == "schema":
                continue
            sys.stdout.write(f"{key}\t{json.dumps(value, default=_jsonable)}\n")
        return
    payload.pop("tsv", None)
    json.dump(payload, sys.stdout, indent=2, default=_jsonable)
    sys.stdout.write("\n")


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise ParseError(f"expected a comma-separated integer list, got {text!r}") from None


def _rational_list(text: str) -> list[Fraction]:
    try:
        return [Fraction(p.strip()) for p in text.split(",") if p.strip()]
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"expected a comma-separated rational list, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise ParseError(f"expected a comma-separated number list, got {text!r}") from None


def _cmd_validate_rank(args) -> tuple[dict, bool]:
    oracle = parse_oracle(_read(args.oracle))
    report = validate_rank_oracle(oracle)
    return {"schema": SCHEMA, "command": "validate-rank",
            "q": oracle.q, "n": oracle.n, "N": oracle.N,
            **report.as_dict()}, report.ok


def _cmd_weights(args) -> tuple[dict, bool]:
    oracle = parse_oracle(_read(args.oracle))
    weights = nochka_weights(oracle)
    return {"schema": SCHEMA, "command": "weights",
            "q": oracle.q, "n": oracle.n, "N": oracle.N,
            **weights.as_dict()}, True


def _cmd_filtration(args) -> tuple[dict, bool]:
    oracle = parse_oracle(_read(args.oracle))
    filtration = build_filtration(oracle)
    return {"schema": SCHEMA, "command": "filtration",
            **filtration.as_dict()}, True


def _cmd_greedy(args) -> tuple[dict, bool]:
    oracle = parse_oracle(_read(args.oracle))
    weights = nochka_weights(oracle)
    subset = _int_list(args.subset)
    costs = _rational_list(args.costs)
    chosen = greedy_select(oracle, weights, subset, costs)
    lhs = sum((weights.omega[j - 1] * costs[j - 1] for j in subset), Fraction(0))
    rhs = sum((costs[j - 1] for j in chosen), Fraction(0))
    return {"schema": SCHEMA, "command": "greedy", "subset": subset,
            "selected": list(chosen), "weighted_sum": str(lhs),
            "selected_sum": str(rhs)}, True


def _cmd_position_check(args) -> tuple[dict, bool]:
    arr = parse_arrangement(_read(args.arr))
    oracle = codim_oracle(arr, max_steps=args.budget_gb_steps)
    report = check_subgeneral_position(arr, oracle=oracle)
    return {"schema": SCHEMA, "command": "position-check",
            "q": arr.q, "n": arr.n, "degrees": list(arr.degrees),
            **report.as_dict()}, report.ok


def _cmd_oracle_dump(args) -> tuple[dict, bool]:
    arr = parse_arrangement(_read(args.arr))
    oracle = codim_oracle(arr, max_steps=args.budget_gb_steps)
    text = format_oracle(oracle)
    if args.out:
        Path(args.out).write_text(text)
        return {"schema": SCHEMA, "command": "oracle-dump", "written": args.out}, True
    sys.stdout.write(text)
    return {}, True


def _cmd_hilbert(args) -> tuple[dict, bool]:
    arr = parse_arrangement(_read(args.arr))
    data = hilbert_function(arr, args.m, max_steps=args.budget_gb_steps)
    return {"schema": SCHEMA, "command": "hilbert", **data.as_dict()}, True


def _cmd_hilbert_weight(args) -> tuple[dict, bool]:
    arr = parse_arrangement(_read(args.arr))
    costs = _rational_list(args.c)
    result = hilbert_weight(arr, args.m, costs, max_steps=args.budget_gb_steps)
    return {"schema": SCHEMA, "command": "hilbert-weight",
            "c": [str(c) for c in costs], **result.as_dict()}, True


def _cmd_bounds(args) -> tuple[dict, bool]:
    params = bounds_mod.ParamSet(args.n, args.degV, args.N, args.q,
                                 tuple(_int_list(args.degrees)), Fraction(args.epsilon))
    result = bounds_mod.truncation_levels(params, hilbert_value=args.H, hilbert_m=args.m)
    return {"schema": SCHEMA, "command": "bounds",
            "epsilon": str(params.epsilon), **result.as_dict()}, True


def _cmd_jensen(args) -> tuple[dict, bool]:
    phi = parse_coordinate(args.phi)
    report = jensen_check(phi, _float_list(args.radii), tol=args.quad_tol)
    return {"schema": SCHEMA, "command": "jensen", "phi": args.phi,
            "quad_tol": args.quad_tol, **report.as_dict()}, True


def _cmd_wronskian_check(args) -> tuple[dict, bool]:
    curve = parse_curve(_read(args.curve))
    report = wronskian_divisor_check(curve.coordinates)
    return {"schema": SCHEMA, "command": "wronskian-check",
            **report.as_dict()}, report.ok


def _cmd_cartan_check(args) -> tuple[dict, bool]:
    arr = parse_arrangement(_read(args.arr))
    curve = parse_curve(_read(args.curve))
    report = cartan_ru_check(curve, arr.forms, Fraction(args.epsilon),
                             _float_list(args.radii), tol=args.quad_tol)
    payload = {"schema": SCHEMA, "command": "cartan-check",
               "quad_tol": args.quad_tol, **report.as_dict()}
    lines = ["r\tT\tmax_sum_integral\twronskian_counting\tlhs\trhs\tslack"]
    for row in report.rows:
        lines.append(f"{row.r:.6g}\t{row.T:.12g}\t{row.max_sum_integral:.12g}"
                     f"\t{row.wronskian_counting:.12g}\t{row.lhs:.12g}"
                     f"\t{row.rhs:.12g}\t{row.slack:.12g}")
    payload["tsv"] = "\n".join(lines) + "\n"
    return payload, True


def _cmd_smt_report(args) -> tuple[dict, bool]:
    arr = parse_arrangement(_read(args.arr))
    curve = parse_curve(_read(args.curve))
    truncations = None
    if args.truncation not in (None, "", "inf"):
        truncations = int(args.truncation)
    elif args.truncation == "inf":
        truncations = math.inf
    position = check_subgeneral_position(
        arr, oracle=codim_oracle(arr, max_steps=args.budget_gb_steps))
    report = smt_report(curve, arr, Fraction(args.epsilon), _float_list(args.radii),
                        truncations=truncations, tol=args.quad_tol, position=position)
    payload = {"schema": SCHEMA, "command": "smt-report", **report.as_dict()}
    payload["tsv"] = report.as_tsv()
    if args.out:
        Path(args.out).write_text(json.dumps(
            {k: v for k, v in payload.items() if k != "tsv"},
            indent=2, default=_jsonable) + "\n")
        payload["written"] = args.out
    return payload, True


def _cmd_gen_fixture(args) -> tuple[dict, bool]:
    fixture = generate_intro_fixture(args.seed)
    out_dir = Path(args.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    arr_path = out_dir / f"intro-{args.seed}.arrangement"
    manifest_path = out_dir / f"intro-{args.seed}.manifest.json"
    arr_path.write_text(format_arrangement(fixture.arrangement))
    manifest_path.write_text(json.dumps(fixture.manifest, indent=2,
                                        default=_jsonable) + "\n")
    return {"schema": SCHEMA, "command": "gen-fixture", "seed": args.seed,
            "attempts": fixture.attempts,
            "arrangement": str(arr_path), "manifest": str(manifest_path),
            "coefficient": fixture.manifest["coefficient"]}, True


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "tsv"), default="json")
    common.add_argument("--seed", type=int, default=1)
    common.add_argument("--budget-gb-steps", type=int, default=20_000, dest="budget_gb_steps")
    common.add_argument("--quad-tol", type=float, default=1e-9, dest="quad_tol")

    parser = argparse.ArgumentParser(prog="nochka",
                                     description="Nochka weights, position checks, and "
                                                 "second-main-theorem numerics")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate-rank", parents=[common])
    p.add_argument("--oracle", required=True)
    p.set_defaults(handler=_cmd_validate_rank)

    p = sub.add_parser("weights", parents=[common])
    p.add_argument("--oracle", required=True)
    p.set_defaults(handler=_cmd_weights)

    p = sub.add_parser("filtration", parents=[common])
    p.add_argument("--oracle", required=True)
    p.set_defaults(handler=_cmd_filtration)

    p = sub.add_parser("greedy", parents=[common])
    p.add_argument("--oracle", required=True)
    p.add_argument("--subset", required=True)
    p.add_argument("--costs", required=True)
    p.set_defaults(handler=_cmd_greedy)

    p = sub.add_parser("position-check", parents=[common])
    p.add_argument("--arr", required=True)
    p.set_defaults(handler=_cmd_position_check)

    p = sub.add_parser("oracle-dump", parents=[common])
    p.add_argument("--arr", required=True)
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_oracle_dump)

    p = sub.add_parser("hilbert", parents=[common])
    p.add_argument("--arr", required=True)
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(handler=_cmd_hilbert)

    p = sub.add_parser("hilbert-weight", parents=[common])
    p.add_argument("--arr", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--c", required=True)
    p.set_defaults(handler=_cmd_hilbert_weight)

    p = sub.add_parser("bounds", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--degV", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--degrees", required=True)
    p.add_argument("--epsilon", required=True)
    p.add_argument("--H", type=int)
    p.add_argument("--m", type=int)
    p.set_defaults(handler=_cmd_bounds)

    p = sub.add_parser("jensen", parents=[common])
    p.add_argument("--phi", required=True)
    p.add_argument("--radii", required=True)
    p.set_defaults(handler=_cmd_jensen)

    p = sub.add_parser("wronskian-check", parents=[common])
    p.add_argument("--curve", required=True)
    p.set_defaults(handler=_cmd_wronskian_check)

    p = sub.add_parser("cartan-check", parents=[common])
    p.add_argument("--arr", required=True)
    p.add_argument("--curve", required=True)
    p.add_argument("--epsilon", required=True)
    p.add_argument("--radii", required=True)
    p.set_defaults(handler=_cmd_cartan_check)

    p = sub.add_parser("smt-report", parents=[common])
    p.add_argument("--arr", required=True)
    p.add_argument("--curve", required=True)
    p.add_argument("--epsilon", required=True)
    p.add_argument("--radii", required=True)
    p.add_argument("--truncation", default=None,
                   help="integer level or `inf` (default: n in hyperplane mode, inf otherwise)")
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_smt_report)

    p = sub.add_parser("gen-fixture", parents=[common])
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_gen_fixture)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        payload, ok = args.handler(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except ResourceBudgetError as exc:
        print(f"resource budget exceeded: {exc}", file=sys.stderr)
        return 3
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2
    if payload:
        _emit(payload, args.format)
    return 0 if ok else 4


def entry() -> None:
    sys.exit(main())
