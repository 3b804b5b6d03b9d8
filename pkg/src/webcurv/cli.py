"""Command-line front end: ``webcurv compute`` and ``webcurv selftest``."""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from .algebra import as_rational
from .connection import blaschke_d3, check_concentration, evaluate_at, jet_curvature_at, run_pipeline
from .errors import InputError, PointError
from .seed import compute_seed
from .matrix import FieldMatrix
from .selftest import format_table, run_selftest
from .web import load_web_spec, parse_web_spec, validate_web

EXIT_OK = 0
EXIT_SELFTEST = 1
EXIT_INPUT = 2
EXIT_POLE = 3
EXIT_CONCENTRATION = 4


def parse_point(text: str) -> tuple[Fraction, Fraction]:
    """Parse ``x=<rat>,y=<rat>``."""
    values = {}
    for part in text.split(","):
        key, sep, value = part.partition("=")
        key = key.strip()
        if not sep or key not in ("x", "y") or key in values:
            raise argparse.ArgumentTypeError(f"expected x=<rational>,y=<rational>, got {text!r}")
        try:
            values[key] = as_rational(value)
        except (InputError, ZeroDivisionError) as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    if set(values) != {"x", "y"}:
        raise argparse.ArgumentTypeError(f"expected x=<rational>,y=<rational>, got {text!r}")
    return values["x"], values["y"]


def matrix_strings(mat: FieldMatrix) -> list[list[str]]:
    return [[str(v) for v in row] for row in mat]


def rational_strings(rows: list[list[Fraction]]) -> list[list[str]]:
    return [[str(v) for v in row] for row in rows]


def _jet_eval(args):
    # the web travels as its text document: sympy field elements do not pickle reliably
    document, point, i0 = args
    return jet_curvature_at(parse_web_spec(document), point, i0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="webcurv", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    comp = sub.add_parser("compute", help="curvature of the web described in a JSON file")
    comp.add_argument("input", type=Path)
    comp.add_argument("--at", dest="points", action="append", type=parse_point, default=[],
                      metavar="x=<rat>,y=<rat>", help="evaluate the curvature at a point (repeatable)")
    comp.add_argument("--jet", action="store_true", help="evaluate points with the truncated-jet backend")
    comp.add_argument("--points-only", action="store_true",
                      help="with --jet, skip the symbolic curvature and report point values only")
    comp.add_argument("--d3-blaschke", action="store_true", help="also emit the d=3 scalar closed form")
    comp.add_argument("--check-concentration", action="store_true",
                      help="exit 4 if a row other than the last is nonzero")
    comp.add_argument("--i0", type=int, default=None, help="force the deleted row of B (1-based)")
    comp.add_argument("--jobs", type=int, default=1, help="worker processes for jet point evaluations")
    comp.add_argument("--output", type=Path, default=None, help="write the document here instead of stdout")

    st = sub.add_parser("selftest", help="run the built-in invariant corpus")
    st.add_argument("--inject-fault", default=None, help=argparse.SUPPRESS)
    return parser


def cmd_compute(args) -> int:
    try:
        spec = load_web_spec(args.input)
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    timing: dict[str, int] = {}
    t0 = time.perf_counter()
    report = validate_web(spec)
    timing["validate"] = int(round((time.perf_counter() - t0) * 1000))
    if not report.discriminant_nonzero:
        print("error: " + "; ".join(report.messages), file=sys.stderr)
        return EXIT_INPUT
    if args.d3_blaschke and spec.d != 3:
        print(f"error: --d3-blaschke needs d = 3, got d = {spec.d}", file=sys.stderr)
        return EXIT_INPUT

    points = ([spec.origin] if spec.origin is not None else []) + list(args.points)
    symbolic = not (args.jet and args.points_only)
    doc: dict = {"d": spec.d, "m": spec.rank_bound}
    try:
        if symbolic:
            pipe = run_pipeline(spec, i0=args.i0)
            timing.update(pipe.timing_ms)
            M, KK, i0 = pipe.M, pipe.KK, pipe.elimination.i0
        else:
            t0 = time.perf_counter()
            _, elim = compute_seed(spec, i0=args.i0)
            timing["seed"] = int(round((time.perf_counter() - t0) * 1000))
            M, KK, i0 = elim.M, None, elim.i0
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    doc["i0"] = i0
    doc["seed_matrix"] = matrix_strings(M)
    doc["curvature"] = matrix_strings(KK) if KK is not None else None
    if args.d3_blaschke:
        doc["blaschke"] = str(blaschke_d3(M))

    t0 = time.perf_counter()
    try:
        if args.jet:
            jobs = [(spec.to_document(), p, i0) for p in points]
            if args.jobs > 1 and len(jobs) > 1:
                with ProcessPoolExecutor(args.jobs) as pool:
                    values = list(pool.map(_jet_eval, jobs))
            else:
                values = [_jet_eval(job) for job in jobs]
        else:
            values = [evaluate_at(KK, p) for p in points]
    except PointError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_POLE
    timing["evaluate"] = int(round((time.perf_counter() - t0) * 1000))

    if KK is not None:
        conc = check_concentration(KK).to_dict()
    else:
        bad = sorted({(i + 1, j + 1) for rows in values for i, row in enumerate(rows[:-1])
                      for j, v in enumerate(row) if v != 0})
        conc = {"ok": not bad, "violations": [list(v) for v in bad]}
    doc["concentration"] = conc
    doc["evaluations"] = [
        {"point": [str(p[0]), str(p[1])], "backend": "jet" if args.jet else "symbolic", "matrix": rational_strings(v)}
        for p, v in zip(points, values)
    ]
    doc["validation"] = {
        "discriminant_nonzero": report.discriminant_nonzero,
        "discriminant_vanishes_at_origin": report.discriminant_vanishes_at_origin,
        "messages": report.messages,
    }
    doc["timing_ms"] = timing

    text = json.dumps(doc, indent=2) + "\n"
    if args.output is not None:
        args.output.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if args.check_concentration and not conc["ok"]:
        print(f"concentration violated at {conc['violations']}", file=sys.stderr)
        return EXIT_CONCENTRATION
    return EXIT_OK


def cmd_selftest(args) -> int:
    results = run_selftest(args.inject_fault)
    print(format_table(results))
    return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_SELFTEST


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "compute":
        return cmd_compute(args)
    return cmd_selftest(args)


if __name__ == "__main__":
    sys.exit(main())
