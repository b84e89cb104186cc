"""Certificate JSON and scan CSV emission.

Floating-point numbers are serialized as decimal strings with 17 significant
digits, which round-trips doubles exactly; rationals are "p/q" strings.  The
reader parses both back, so certificates can be audited by the library that
wrote them.
"""

from __future__ import annotations

import csv
import json
from fractions import Fraction
from pathlib import Path

from .certify import Certificate, CheckRecord
from .finite_type import TypeReport
from .monomials import AmbientPoint

SCHEMA_VERSION = 1


def fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _fraction_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _witness_json(witness):
    if witness is None:
        return None
    if isinstance(witness, AmbientPoint):
        return {
            "z": [[fmt(v.real), fmt(v.imag)] for v in witness.z],
            "z_last": [fmt(witness.z_last.real), fmt(witness.z_last.imag)],
        }
    return {"z": [[fmt(v.real), fmt(v.imag)] for v in witness], "z_last": None}


def _type_report_json(report: TypeReport | None):
    if report is None:
        return None
    return {
        "pure_powers": list(report.pure_powers),
        "one_type": report.one_type,
        "multiplicity": report.multiplicity,
        "epsilon": _fraction_str(report.epsilon),
        "bounds": {
            "lower": _fraction_str(report.lower_bound),
            "upper": _fraction_str(report.upper_bound),
        },
    }


def certificate_to_json(cert: Certificate) -> str:
    checks = []
    for rec in cert.checks:
        checks.append(
            {
                "name": rec.name,
                "pass": rec.passed,
                "margin": fmt(rec.margin),
                "witness_point": _witness_json(rec.witness),
                "delta": None if rec.delta is None else fmt(rec.delta),
            }
        )
    payload = {
        "schema_version": SCHEMA_VERSION,
        "problem_digest": cert.problem_digest,
        "type_report": _type_report_json(cert.type_report),
        "constants": {key: fmt(value) for key, value in cert.constants.items()},
        "checks": checks,
        "overall": cert.overall,
    }
    if cert.type_error_coordinate is not None:
        # 1-based in reports, matching the z_1 ... z_n notation in problem files
        payload["not_finite_type_coordinate"] = cert.type_error_coordinate + 1
    return json.dumps(payload, indent=2) + "\n"


def emit_certificate(cert: Certificate, path) -> str:
    text = certificate_to_json(cert)
    Path(path).write_text(text)
    return text


def _parse_number(text):
    if text is None:
        return None
    return float(text)


def load_certificate(path) -> dict:
    """Read a certificate back with numbers and rationals parsed."""
    payload = json.loads(Path(path).read_text())
    out = dict(payload)
    if payload.get("type_report") is not None:
        tr = dict(payload["type_report"])
        tr["epsilon"] = Fraction(tr["epsilon"])
        tr["bounds"] = {
            "lower": Fraction(tr["bounds"]["lower"]),
            "upper": Fraction(tr["bounds"]["upper"]),
        }
        out["type_report"] = tr
    out["constants"] = {k: float(v) for k, v in payload["constants"].items()}
    checks = []
    for rec in payload["checks"]:
        item = dict(rec)
        item["margin"] = float(rec["margin"])
        item["delta"] = _parse_number(rec["delta"])
        wp = rec["witness_point"]
        if wp is not None:
            z = tuple(complex(float(re), float(im)) for re, im in wp["z"])
            z_last = (
                None
                if wp["z_last"] is None
                else complex(float(wp["z_last"][0]), float(wp["z_last"][1]))
            )
            item["witness_point"] = {"z": z, "z_last": z_last}
        checks.append(item)
    out["checks"] = checks
    return out


SCAN_HEADER = ("delta", "coordinate", "radius", "t", "exact_a", "paper_a", "margin")


def write_scan_csv(path, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SCAN_HEADER)
        for delta, coord, radius, t, exact, paper, margin in rows:
            writer.writerow(
                [fmt(delta), coord, fmt(radius), fmt(t), fmt(exact), fmt(paper), fmt(margin)]
            )


def read_scan_csv(path):
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != SCAN_HEADER:
            raise ValueError(f"unexpected scan header {header!r}")
        for rec in reader:
            rows.append(
                (
                    float(rec[0]),
                    int(rec[1]),
                    float(rec[2]),
                    float(rec[3]),
                    float(rec[4]),
                    float(rec[5]),
                    float(rec[6]),
                )
            )
    return rows
