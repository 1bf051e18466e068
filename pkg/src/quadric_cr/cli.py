"""Command-line front end.

Exit codes: 0 when everything ran and every requested check passed, 1 when a
check failed (degree bound, stabilization, harness implication, internal
consistency), 2 for input or usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .catalog import CATALOG, get_entry, expected_mismatches
from .exact import GaussQ, format_rational
from .jet import char_variety_test, degree_bounds, solve_jet_system, truncation_report
from .model import ModelError, ModelParseError, dumps_model, load_model
from .nondegeneracy import (
    DEFAULT_RELATION_DEGREE,
    ClassificationReport,
    InternalConsistencyError,
    classify,
    random_model,
    run_harness,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT = 2


class InputError(Exception):
    pass


def _scalar(x):
    if isinstance(x, GaussQ):
        return str(x)
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, int):
        return str(x)
    return format_rational(x)


def resolve_model(source: str):
    """'catalog:NAME' or a path to a model file. Returns (model, catalog entry or None)."""
    if source.startswith("catalog:"):
        name = source.split(":", 1)[1]
        try:
            entry = get_entry(name)
        except KeyError as exc:
            raise InputError(exc.args[0]) from None
        return entry.model, entry
    try:
        return load_model(source), None
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc.strerror}") from None
    except ModelParseError as exc:
        raise InputError(f"{source}: {exc}") from None
    except ModelError as exc:
        raise InputError(f"{source}: {exc}") from None


def report_to_dict(report: ClassificationReport) -> dict:
    cert = report.sesqui_status.certificate
    w = report.witnesses
    return {
        "condition_a": report.condition_a,
        "condition_b": report.condition_b,
        "beloshapka_nondegenerate": report.beloshapka_nondegenerate,
        "tumanov": report.tumanov.holds,
        "tumanov_witness": None if report.tumanov.witness is None else [_scalar(x) for x in report.tumanov.witness],
        "cone_generating": report.cone_generating,
        "finite_type_two": report.finite_type_two,
        "condition_a_complex": report.condition_a_complex,
        "holomorphic_nondegeneracy_implied": report.holomorphic_nondegeneracy_implied,
        "sesqui_verdict": report.sesqui_status.verdict,
        "sesqui_certificate": None if cert is None else str(cert.polynomial),
        "sesqui_certificate_degree": None if cert is None else cert.degree,
        "witness_lambda": None if w is None or w.lambda_ is None else [_scalar(x) for x in w.lambda_],
        "witness_kernel_vector": None if w is None or w.kernel_vector is None else [_scalar(x) for x in w.kernel_vector],
    }


def _emit(args, doc: dict, lines: Sequence[str] | None = None):
    if args.json:
        print(json.dumps(doc, indent=2))
        return
    if lines is not None:
        for line in lines:
            print(line)
        return
    for k, v in doc.items():
        print(f"{k}: {_text(v)}")


def _text(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "-"
    if isinstance(v, list):
        return "(" + ", ".join(_text(x) for x in v) + ")"
    if isinstance(v, dict):
        return ", ".join(f"{k}={_text(x)}" for k, x in v.items())
    return str(v)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_classify(args) -> int:
    model, entry = resolve_model(args.model)
    change = entry.target_change if entry is not None and not args.raw_target else None
    try:
        report = classify(model, args.relation_degree, change)
    except InternalConsistencyError as exc:
        print(f"internal consistency check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    doc = {"n": model.n, "d": model.d}
    doc.update(report_to_dict(report))
    doc["target_change_applied"] = change is not None
    status = EXIT_OK
    if entry is not None and entry.expected:
        mism = expected_mismatches(entry, report)
        doc["expected_mismatches"] = mism
        if mism:
            status = EXIT_CHECK_FAILED
    _emit(args, doc)
    return status


def cmd_aut(args) -> int:
    if args.cap < 2:
        raise InputError("--cap must be at least 2")
    model, _ = resolve_model(args.model)
    space = solve_jet_system(model, args.cap, args.route)
    previous = solve_jet_system(model, args.cap - 1, args.route)
    stable = previous.dimension == space.dimension
    bounds = degree_bounds(space)
    doc = {
        "n": model.n,
        "d": model.d,
        "route": args.route,
        "cap": args.cap,
        "dimension": space.dimension,
        "previous_cap_dimension": previous.dimension,
        "stabilization": "OK" if stable else "FAILED",
        "block_degrees": space.block_degrees,
        "degree_bounds": bounds,
        "degree_bounds_pass": all(bounds.values()),
        "basis": [b.to_json() for b in space.basis],
    }
    if args.route == "general":
        doc["truncation_ok"] = truncation_report(space).ok
    lines = None
    if not args.json:
        lines = [
            f"model: n={model.n}, d={model.d}",
            f"route: {args.route}, cap: {args.cap}",
            f"dimension: {space.dimension} (cap {args.cap - 1}: {previous.dimension})",
            f"stabilization: {doc['stabilization']}" + ("" if stable else " (dimension grew)"),
            "block degrees: " + _text(space.block_degrees),
        ]
        for name, ok in bounds.items():
            lines.append(f"  {name}: {'pass' if ok else 'FAIL'}")
        lines.append(f"degree_bounds_pass: {_text(doc['degree_bounds_pass'])}")
        if "truncation_ok" in doc:
            lines.append(f"truncation_ok: {_text(doc['truncation_ok'])}")
        lines.append("basis:")
        for k, b in enumerate(space.basis, 1):
            lines.append(f"  [{k}] {b}")
    _emit(args, doc, lines)
    return EXIT_OK if stable and doc["degree_bounds_pass"] else EXIT_CHECK_FAILED


def _parse_zeta(text: str, d: int) -> list[GaussQ]:
    parts = text.split(",")
    try:
        vals = [GaussQ.parse(p) for p in parts]
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"malformed --zeta {text!r}: {exc}") from None
    if len(vals) != d:
        raise InputError(f"--zeta needs {d} comma-separated components, got {len(vals)}")
    return vals


def cmd_charvar(args) -> int:
    model, _ = resolve_model(args.model)
    zeta = _parse_zeta(args.zeta, model.d)
    char = char_variety_test(model, zeta)
    doc = {
        "zeta": [str(z) for z in zeta],
        "characteristic": char,
        "verdict": "characteristic" if char else "non-characteristic",
    }
    _emit(args, doc, None if args.json else [doc["verdict"]])
    return EXIT_OK


def cmd_catalog(args) -> int:
    if args.action == "list":
        doc = {"entries": [{"name": e.name, "n": e.model.n, "d": e.model.d, "provenance": e.provenance} for e in CATALOG.values()]}
        lines = [f"{e.name}  (n={e.model.n}, d={e.model.d})  {e.provenance}" for e in CATALOG.values()]
        _emit(args, doc, None if args.json else lines)
        return EXIT_OK
    if not args.name:
        raise InputError("catalog show needs an entry name")
    try:
        entry = get_entry(args.name)
    except KeyError as exc:
        raise InputError(exc.args[0]) from None
    # the model file format is itself JSON, so both modes print it verbatim
    print(dumps_model(entry.model))
    return EXIT_OK


def cmd_harness(args) -> int:
    if args.count < 1:
        raise InputError("--count must be at least 1")
    if not (1 <= args.n_min <= args.n_max) or not (1 <= args.d_min <= args.d_max) or args.bound < 1:
        raise InputError("need 1 <= n-min <= n-max, 1 <= d-min <= d-max and bound >= 1")
    summary = run_harness(
        args.count, args.n_max, args.d_max, args.bound, args.seed, args.n_min, args.d_min, args.relation_degree
    )
    doc = summary.as_dict()
    lines = None
    if not args.json:
        lines = [
            f"models: {summary.count} (seed {summary.seed})",
            f"condition (a) true: {summary.condition_a_true}",
            f"condition (b) true: {summary.condition_b_true}",
            f"tumanov true: {summary.tumanov_true}",
        ]
        for name, v in doc["implications"].items():
            lines.append(f"  {name}: hypothesis held {v['hypothesis_held']}, violations {v['violations']}")
        lines.append(f"total violations: {summary.total_violations}")
    _emit(args, doc, lines)
    return EXIT_OK if summary.total_violations == 0 else EXIT_CHECK_FAILED


def cmd_random(args) -> int:
    if args.n < 1 or args.d < 1 or args.bound < 1:
        raise InputError("--n, --d and --bound must be positive")
    model = random_model(args.n, args.d, args.bound, args.seed)
    text = dumps_model(model)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    # global flags are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed (default 1)")

    parser = argparse.ArgumentParser(prog="quadric-cr", description="Nondegeneracy and jet analysis of quadric CR models.", parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="nondegeneracy report for a model")
    p.add_argument("model", help="model file or catalog:NAME")
    p.add_argument("--relation-degree", type=_positive, default=DEFAULT_RELATION_DEGREE)
    p.add_argument("--raw-target", action="store_true", help="ignore the catalog's target coordinate change")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("aut", parents=[common], help="solve for infinitesimal automorphisms")
    p.add_argument("model")
    p.add_argument("--cap", type=int, default=4)
    p.add_argument("--route", choices=("direct", "general"), default="direct")
    p.set_defaults(func=cmd_aut)

    p = sub.add_parser("charvar", parents=[common], help="characteristic-set membership of a symbol vector")
    p.add_argument("model")
    p.add_argument("--zeta", required=True, help='comma-separated Gaussian rationals, e.g. "1,0,1/2-i"')
    p.set_defaults(func=cmd_charvar)

    p = sub.add_parser("catalog", parents=[common], help="built-in examples")
    p.add_argument("action", choices=("list", "show"))
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("harness", parents=[common], help="check implications on random models")
    p.add_argument("--count", type=int, default=500)
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--d-min", type=int, default=1)
    p.add_argument("--d-max", type=int, default=4)
    p.add_argument("--bound", type=int, default=2)
    p.add_argument("--relation-degree", type=_positive, default=2)
    p.set_defaults(func=cmd_harness)

    p = sub.add_parser("random", parents=[common], help="emit a random model file")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--bound", type=int, default=2)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_random)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.json = getattr(args, "json", False)
    args.seed = getattr(args, "seed", 1)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
