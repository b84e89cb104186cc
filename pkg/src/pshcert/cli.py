"""Command-line driver.

Subcommands: type, mult, certify, compare, scan.  Exit codes: 0 every check
passed, 1 a check failed (the certificate is still written), 2 invalid
input, 3 internal numeric failure (eigensolver non-convergence).  The only
environment variable read is PSHCERT_THREADS (delta-sweep workers).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .certify import (
    EigensolverError,
    certify_epsilon,
    check_dominance,
    scan_rows,
)
from .finite_type import (
    MultiplicityBudgetError,
    NotFiniteType,
    conjecture_bounds,
    multiplicity,
)
from .problem_io import ProblemError, parse_deltas, parse_problem
from .reports import certificate_to_json, emit_certificate, fmt, write_scan_csv

EXIT_PASS = 0
EXIT_CHECK_FAILED = 1
EXIT_INVALID_INPUT = 2
EXIT_NUMERIC_FAILURE = 3


def _load(path: str):
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise ProblemError(None, f"cannot read {path}: {err}")
    return parse_problem(text)


def _type_report_json(report) -> str:
    return json.dumps(
        {
            "pure_powers": list(report.pure_powers),
            "one_type": report.one_type,
            "multiplicity": report.multiplicity,
            "epsilon": f"{report.epsilon.numerator}/{report.epsilon.denominator}",
            "bounds": {
                "lower": f"{report.lower_bound.numerator}/{report.lower_bound.denominator}",
                "upper": f"{report.upper_bound.numerator}/{report.upper_bound.denominator}",
            },
        },
        indent=2,
    )


def _cmd_type(args) -> int:
    u, _plan = _load(args.problem)
    try:
        report = conjecture_bounds(u)
    except NotFiniteType as err:
        print(json.dumps({"error": "not_finite_type", "coordinate": err.coordinate + 1}))
        return EXIT_CHECK_FAILED
    print(_type_report_json(report))
    return EXIT_PASS


def _cmd_mult(args) -> int:
    u, _plan = _load(args.problem)
    try:
        print(multiplicity(u))
    except NotFiniteType as err:
        print(json.dumps({"error": "not_finite_type", "coordinate": err.coordinate + 1}))
        return EXIT_CHECK_FAILED
    return EXIT_PASS


def _cmd_certify(args) -> int:
    u, plan = _load(args.problem)
    if args.deltas:
        plan = replace(plan, delta_sweep=parse_deltas(args.deltas))
    cert = certify_epsilon(u, plan)
    text = certificate_to_json(cert)
    if args.out:
        emit_certificate(cert, args.out)
    else:
        sys.stdout.write(text)
    return EXIT_PASS if cert.overall else EXIT_CHECK_FAILED


def _cmd_compare(args) -> int:
    u1, plan = _load(args.problem1)
    u2, _ = _load(args.problem2)
    forward = check_dominance(u1, u2, plan)
    reverse = check_dominance(u2, u1, plan)
    if forward.passed and reverse.passed:
        note = "Levi forms agree on the sample plan; certified orders transfer both ways."
    elif forward.passed:
        note = (
            "first dominates second: any order certified for the second "
            "transfers to the first"
        )
    elif reverse.passed:
        note = (
            "second dominates first: any order certified for the first "
            "transfers to the second"
        )
    else:
        note = "no dominance either way on the sample plan"
    print(
        json.dumps(
            {
                "forward": {"pass": forward.passed, "margin": fmt(forward.margin)},
                "reverse": {"pass": reverse.passed, "margin": fmt(reverse.margin)},
                "transfer": note,
            },
            indent=2,
        )
    )
    return EXIT_PASS if (forward.passed or reverse.passed) else EXIT_CHECK_FAILED


def _cmd_scan(args) -> int:
    u, plan = _load(args.problem)
    if not 0.0 < args.delta < 1.0:
        raise ProblemError(None, f"delta {args.delta} outside (0, 1)")
    try:
        rows = scan_rows(u, plan, args.delta)
    except NotFiniteType as err:
        print(json.dumps({"error": "not_finite_type", "coordinate": err.coordinate + 1}))
        return EXIT_CHECK_FAILED
    write_scan_csv(args.csv, rows)
    print(f"wrote {len(rows)} rows to {args.csv}")
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pshcert",
        description="Certify Hessian lower bounds for weight families on rigid monomial domains.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_type = sub.add_parser("type", help="print the type report as JSON")
    p_type.add_argument("problem")
    p_type.set_defaults(fn=_cmd_type)

    p_mult = sub.add_parser("mult", help="print the staircase multiplicity")
    p_mult.add_argument("problem")
    p_mult.set_defaults(fn=_cmd_mult)

    p_cert = sub.add_parser("certify", help="run the full check battery")
    p_cert.add_argument("problem")
    p_cert.add_argument("--deltas", help="decades k1..k2, e.g. 2..8")
    p_cert.add_argument("--out", help="certificate path (default: stdout)")
    p_cert.set_defaults(fn=_cmd_certify)

    p_cmp = sub.add_parser("compare", help="check Levi dominance both ways")
    p_cmp.add_argument("problem1")
    p_cmp.add_argument("problem2")
    p_cmp.set_defaults(fn=_cmd_compare)

    p_scan = sub.add_parser("scan", help="dump the radial resolve profile as CSV")
    p_scan.add_argument("problem")
    p_scan.add_argument("--delta", type=float, required=True)
    p_scan.add_argument("--csv", required=True)
    p_scan.set_defaults(fn=_cmd_scan)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ProblemError, MultiplicityBudgetError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except EigensolverError as err:
        print(f"numeric failure: {err}", file=sys.stderr)
        return EXIT_NUMERIC_FAILURE


if __name__ == "__main__":
    sys.exit(main())
