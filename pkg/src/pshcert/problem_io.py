"""Plain-text problem files.

Format (one statement per line, '#' starts a comment):

    n = 2
    mon: 1 0 : 2 0        # coefficient re, im, then one exponent per coordinate
    mon: 1 0 : 0 3
    mon: 1 0 : 1 1
    radius = 0.5          # optional plan overrides follow
    radial = 64
    phases = 8
    deltas = 2..8         # decades 1e-2 .. 1e-8, or a comma list of floats
    seed = 101

Parsing is strict: errors carry the line number, coefficients must be
nonzero, generators must vanish at the origin, and every generator must
match the declared dimension.
"""

from __future__ import annotations

from .certify import SamplePlan
from .monomials import MixedTerm, Monomial


class ProblemError(ValueError):
    """Problem file rejected; the message carries the offending line."""

    def __init__(self, line_no: int | None, message: str):
        self.line_no = line_no
        prefix = f"line {line_no}: " if line_no is not None else ""
        super().__init__(prefix + message)


def parse_deltas(text: str, line_no: int | None = None) -> tuple[float, ...]:
    """'k1..k2' means the decades 1e-k1 .. 1e-k2; otherwise a comma list."""
    text = text.strip()
    if ".." in text:
        lo_txt, _, hi_txt = text.partition("..")
        try:
            lo, hi = int(lo_txt), int(hi_txt)
        except ValueError:
            raise ProblemError(line_no, f"bad delta decades {text!r}, expected k1..k2")
        if not 1 <= lo <= hi:
            raise ProblemError(line_no, f"delta decades {text!r} must satisfy 1 <= k1 <= k2")
        return tuple(float(f"1e-{k}") for k in range(lo, hi + 1))
    try:
        sweep = tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise ProblemError(line_no, f"bad delta list {text!r}")
    if not sweep:
        raise ProblemError(line_no, "empty delta list")
    return sweep


def parse_problem(text: str) -> tuple[MixedTerm, SamplePlan]:
    dimension = None
    monomial_lines: list[tuple[int, str]] = []
    overrides: dict[str, object] = {}

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("mon:"):
            monomial_lines.append((line_no, line[len("mon:"):]))
            continue
        if "=" not in line:
            raise ProblemError(line_no, f"unrecognized statement {line!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key == "n":
            try:
                dimension = int(value)
            except ValueError:
                raise ProblemError(line_no, f"bad dimension {value!r}")
            if dimension < 1:
                raise ProblemError(line_no, "dimension must be >= 1")
        elif key == "radius":
            try:
                overrides["radius"] = float(value)
            except ValueError:
                raise ProblemError(line_no, f"bad radius {value!r}")
        elif key in ("radial", "phases", "seed"):
            try:
                overrides[{"radial": "radial_points", "phases": "phase_points", "seed": "seed"}[key]] = int(value)
            except ValueError:
                raise ProblemError(line_no, f"bad integer for {key}: {value!r}")
        elif key == "deltas":
            overrides["delta_sweep"] = parse_deltas(value, line_no)
        else:
            raise ProblemError(line_no, f"unknown key {key!r}")

    if dimension is None:
        raise ProblemError(None, "missing dimension line 'n = ...'")
    if not monomial_lines:
        raise ProblemError(None, "no generators ('mon:' lines)")

    generators = []
    for line_no, body in monomial_lines:
        head, sep, tail = body.partition(":")
        if not sep:
            raise ProblemError(line_no, "generator needs 'mon: <re> <im> : <exponents>'")
        coef_tokens = head.split()
        if len(coef_tokens) != 2:
            raise ProblemError(line_no, f"expected two coefficient components, got {len(coef_tokens)}")
        try:
            coefficient = complex(float(coef_tokens[0]), float(coef_tokens[1]))
        except ValueError:
            raise ProblemError(line_no, f"bad coefficient {head.strip()!r}")
        if coefficient == 0:
            raise ProblemError(line_no, "zero coefficient")
        exp_tokens = tail.split()
        if len(exp_tokens) != dimension:
            raise ProblemError(
                line_no, f"expected {dimension} exponents, got {len(exp_tokens)}"
            )
        try:
            exponents = tuple(int(tok) for tok in exp_tokens)
        except ValueError:
            raise ProblemError(line_no, f"bad exponents {tail.strip()!r}")
        if any(e < 0 for e in exponents):
            raise ProblemError(line_no, "negative exponent")
        if not any(exponents):
            raise ProblemError(line_no, "constant generator violates u(0) = 0")
        try:
            generators.append(Monomial(coefficient, exponents))
        except ValueError as err:
            raise ProblemError(line_no, str(err))

    try:
        mixed = MixedTerm(dimension, tuple(generators))
        plan = SamplePlan(**overrides)
    except ValueError as err:
        raise ProblemError(None, str(err))
    return mixed, plan


def _format_deltas(sweep: tuple[float, ...]) -> str:
    decades = []
    for d in sweep:
        k = round(-_log10(d))
        if k >= 1 and float(f"1e-{k}") == d:
            decades.append(k)
        else:
            decades = None
            break
    if decades and decades == list(range(decades[0], decades[0] + len(decades))):
        return f"{decades[0]}..{decades[-1]}"
    return ",".join(f"{d:.17g}" for d in sweep)


def _log10(x: float) -> float:
    import math

    return math.log10(x)


def serialize_problem(u: MixedTerm, plan: SamplePlan) -> str:
    """Canonical text whose parse reproduces (u, plan) exactly."""
    lines = [f"n = {u.dimension}"]
    for g in u.generators:
        exps = " ".join(str(e) for e in g.exponents)
        lines.append(f"mon: {g.coefficient.real:.17g} {g.coefficient.imag:.17g} : {exps}")
    lines.append(f"radius = {plan.radius:.17g}")
    lines.append(f"radial = {plan.radial_points}")
    lines.append(f"phases = {plan.phase_points}")
    lines.append(f"deltas = {_format_deltas(plan.delta_sweep)}")
    lines.append(f"seed = {plan.seed}")
    return "\n".join(lines) + "\n"
