"""Verification engine: sampling plans, numeric oracles, and the check battery.

The quantifier "for all tangent directions L" is realized as the smallest
eigenvalue of the relevant Hermitian form (cyclic Jacobi on the complex
matrix); "for all z" is realized as a deterministic sample plan whose radial
part mixes an absolute log grid covering the neighborhood with a grid scaled
by tau_i(delta), so measured margins are comparable across the delta sweep.
A golden-section refinement around the coarse minimizer makes the recorded
margin a tight estimate of the true infimum.
"""

from __future__ import annotations

import hashlib
import math
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Callable

from .finite_type import NotFiniteType, TypeReport, conjecture_bounds
from .monomials import (
    AmbientPoint,
    HermitianForm,
    MixedTerm,
    Monomial,
    eval_mixed,
    levi_form,
    modsq,
)
from .weights import (
    E_MINUS_3,
    WeightFamily,
    build_cutoff,
    choose_constants,
    delta_two_eps,
    lambda_hessian,
    lambda_weight,
    rescale_family,
    resolve_hessian,
    tau,
)

DEFAULT_DELTAS = tuple(float(f"1e-{k}") for k in range(2, 9))
DEFAULT_STRIP_LEVELS = (0.0, -0.25, -0.5, -0.75, -0.99, -3.0, -4.0)

# extra r/delta targets used only by the plurisubharmonicity sweep: the
# outer shell of the delta-neighborhood and the region where the hinge
# switches on
PSH_POSITIVE_LEVELS = (0.5, 0.9)
PSH_MID_LEVELS = (-1.5, -2.2, -2.5)

STRIP_SAFETY = 0.5  # headroom for mixing between tangential and last direction
SCALED_GRID_MAX = 1.5

RESOLVE_TOLERANCE = 1e-6
RESOLVE_STABILITY = 1e-6
PSH_FLOOR = -1e-9
DOMINANCE_FLOOR = -1e-9
STRIP_STABILITY = 0.05


class EigensolverError(Exception):
    """Jacobi iteration failed to reduce the off-diagonal norm."""


def hermitian_min_eigenvalue(form: HermitianForm, max_sweeps: int = 100) -> float:
    """Smallest eigenvalue of a Hermitian form via cyclic complex Jacobi.

    Rotations stop once the off-diagonal Frobenius norm is below
    1e-12 * (1 + max-norm of the input); non-convergence raises instead of
    returning a silently wrong value.
    """
    n = form.dim
    if n == 1:
        return form.entries[0][0].real
    a = form.to_rows()
    tol = 1e-12 * (1.0 + form.max_abs())
    for _sweep in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += modsq(a[p][q])
        if math.sqrt(off) <= tol:
            return min(a[i][i].real for i in range(n))
        for p in range(n - 1):
            for q in range(p + 1, n):
                alpha = a[p][q]
                b = abs(alpha)
                if b == 0.0:
                    continue
                phase = alpha / b
                diff = (a[q][q].real - a[p][p].real) / (2.0 * b)
                t = (1.0 if diff >= 0.0 else -1.0) / (
                    abs(diff) + math.sqrt(1.0 + diff * diff)
                )
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                s_conj_phase = s * phase.conjugate()
                s_phase = s * phase
                for k in range(n):
                    if k == p or k == q:
                        continue
                    akp = a[k][p]
                    akq = a[k][q]
                    a[k][p] = akp * c - akq * s_conj_phase
                    a[k][q] = akp * s_phase + akq * c
                    a[p][k] = a[k][p].conjugate()
                    a[q][k] = a[k][q].conjugate()
                app = a[p][p].real
                aqq = a[q][q].real
                a[p][p] = complex(app - t * b)
                a[q][q] = complex(aqq + t * b)
                a[p][q] = complex(0.0)
                a[q][p] = complex(0.0)
    raise EigensolverError(
        f"Jacobi did not converge after {max_sweeps} sweeps on a {n}x{n} form"
    )


def fd_hessian(field: Callable[[tuple[complex, ...]], float], z: tuple[complex, ...], h) -> HermitianForm:
    """Mixed complex Hessian d^2 field / dz_i dconj(z_k) by central differences.

    Works on the four underlying real directions per coordinate pair:
    entry(i,k) = ( F_{x_i x_k} + F_{y_i y_k} + i (F_{x_i y_k} - F_{y_i x_k}) ) / 4.
    ``h`` is a scalar step or one step per coordinate; pick steps matching
    each coordinate's variation scale.
    """
    d = len(z)
    steps = tuple(float(v) for v in h) if hasattr(h, "__len__") else (float(h),) * d
    if len(steps) != d:
        raise ValueError("need one step per coordinate")
    if any(s <= 0.0 for s in steps):
        raise ValueError("steps must be positive")

    def shifted(i, dre, dim_, k=None, kre=0.0, kim=0.0):
        pt = list(z)
        pt[i] = pt[i] + complex(dre, dim_)
        if k is not None:
            pt[k] = pt[k] + complex(kre, kim)
        return field(tuple(pt))

    f0 = field(z)

    def second_same(i, imag: bool) -> float:
        hh = steps[i]
        if imag:
            plus, minus = shifted(i, 0.0, hh), shifted(i, 0.0, -hh)
        else:
            plus, minus = shifted(i, hh, 0.0), shifted(i, -hh, 0.0)
        return (plus - 2.0 * f0 + minus) / (hh * hh)

    def second_cross(i, i_imag: bool, k, k_imag: bool) -> float:
        hi, hk = steps[i], steps[k]
        di = (0.0, hi) if i_imag else (hi, 0.0)
        dk = (0.0, hk) if k_imag else (hk, 0.0)
        pp = shifted(i, di[0], di[1], k, dk[0], dk[1])
        pm = shifted(i, di[0], di[1], k, -dk[0], -dk[1])
        mp = shifted(i, -di[0], -di[1], k, dk[0], dk[1])
        mm = shifted(i, -di[0], -di[1], k, -dk[0], -dk[1])
        return (pp - pm - mp + mm) / (4.0 * hi * hk)

    def fn(i, k):
        if i == k:
            return complex(0.25 * (second_same(i, False) + second_same(i, True)))
        re = second_cross(i, False, k, False) + second_cross(i, True, k, True)
        im = second_cross(i, False, k, True) - second_cross(i, True, k, False)
        return 0.25 * complex(re, im)

    return HermitianForm.from_upper(d, fn)


@dataclass(frozen=True)
class SamplePlan:
    """Deterministic sampling recipe shared by every check.

    ``strip_levels`` are multiples of delta: values in (-1, 0] sample the
    boundary strip, and the entries -3 and -4 are the flatness anchors.
    """

    radius: float = 0.5
    radial_points: int = 64
    phase_points: int = 8
    delta_sweep: tuple[float, ...] = DEFAULT_DELTAS
    strip_levels: tuple[float, ...] = DEFAULT_STRIP_LEVELS
    seed: int = 101

    def __post_init__(self):
        if not 0.0 < self.radius <= 1.0:
            raise ValueError("radius must lie in (0, 1]")
        if self.radial_points < 8:
            raise ValueError("need at least 8 radial points")
        if self.phase_points < 1:
            raise ValueError("need at least one phase")
        if not self.delta_sweep:
            raise ValueError("empty delta sweep")
        for dlt in self.delta_sweep:
            if not 0.0 < dlt < 1.0:
                raise ValueError(f"delta {dlt} outside (0, 1)")
        for lvl in self.strip_levels:
            if not (-1.0 < lvl <= 0.0 or lvl in (-3.0, -4.0)):
                raise ValueError(f"strip level {lvl} outside (-1, 0] and not a flatness anchor")

    def absolute_radii(self) -> tuple[float, ...]:
        """Log-spaced coverage of [1e-6 radius, radius]."""
        lo = 1e-6 * self.radius
        n = self.radial_points
        ratio = (self.radius / lo) ** (1.0 / (n - 1))
        out = [lo * ratio**k for k in range(n - 1)]
        out.append(self.radius)
        return tuple(out)

    def scaled_sgrid(self) -> tuple[float, ...]:
        """Fixed grid of s = |z_i| / tau_i values, anchored at the regime edges."""
        n = self.radial_points
        grid = {SCALED_GRID_MAX * k / (n - 1) for k in range(n)}
        grid.add(math.sqrt(0.5))
        grid.add(1.0)
        grid.add(0.0)
        return tuple(sorted(grid))

    def scaled_radii(self, m_i: int, delta: float) -> tuple[float, ...]:
        t = tau(delta, m_i)
        return tuple(s * t for s in self.scaled_sgrid() if s * t <= self.radius)

    def radial_samples(self, m_i: int, delta: float) -> tuple[float, ...]:
        t = tau(delta, m_i)
        pts = set(self.absolute_radii())
        pts.update(self.scaled_radii(m_i, delta))
        for anchor in (t / math.sqrt(2.0), t):
            if anchor <= self.radius:
                pts.add(anchor)
        pts.add(0.0)
        return tuple(sorted(pts))

    def phases(self) -> tuple[complex, ...]:
        return tuple(
            complex(math.cos(2.0 * math.pi * k / self.phase_points),
                    math.sin(2.0 * math.pi * k / self.phase_points))
            for k in range(self.phase_points)
        )

    def weight_radii(self, m_i: int, delta: float) -> tuple[float, ...]:
        """Thinned radial set for the (n+1)-dimensional weight checks."""
        t = tau(delta, m_i)
        pts = {0.0}
        pts.update(self.scaled_radii(m_i, delta)[::3])
        pts.update(self.absolute_radii()[::6])
        for anchor in (t / math.sqrt(2.0), t):
            if anchor <= self.radius:
                pts.add(anchor)
        return tuple(sorted(pts))


@dataclass(frozen=True)
class CheckRecord:
    """One verified statement: worst margin, where it happened, at which delta."""

    name: str
    passed: bool
    margin: float
    witness: AmbientPoint | tuple | None
    delta: float | None


# ---------------------------------------------------------------------------
# margin primitives: single source for both the checks and the certificate
# reproducibility contract


def resolve_margin(u: MixedTerm, w: WeightFamily, z: tuple[complex, ...], delta: float) -> float:
    """min-eig(levi(u)/delta + hess rho) * delta^(2 eps)."""
    h = resolve_hessian(u, w, z, delta)
    return hermitian_min_eigenvalue(h) * delta_two_eps(delta, w.epsilon)


def psh_slack(u: MixedTerm, w: WeightFamily, point: AmbientPoint, delta: float) -> float:
    """Smallest eigenvalue of the weight Hessian, normalized by 1 + trace."""
    h = lambda_hessian(u, w, point, delta)
    return hermitian_min_eigenvalue(h) / (1.0 + h.trace())


def strip_margin(u: MixedTerm, w: WeightFamily, point: AmbientPoint, delta: float) -> float:
    """min-eig of the weight Hessian on the strip, rescaled by delta^(2 eps)."""
    h = lambda_hessian(u, w, point, delta)
    return hermitian_min_eigenvalue(h) * delta_two_eps(delta, w.epsilon)


def flatness_defect(u: MixedTerm, w: WeightFamily, point: AmbientPoint, delta: float) -> float:
    """|weight| plus the max-norm of its Hessian; must be exactly 0 below r = -3 delta."""
    h = lambda_hessian(u, w, point, delta)
    return abs(lambda_weight(u, w, point, delta)) + h.max_abs()


def uniform_ratio(u: MixedTerm, w: WeightFamily, point: AmbientPoint, delta: float) -> float:
    """|weight| / C'; at most 1 on the whole delta-neighborhood."""
    return abs(lambda_weight(u, w, point, delta)) / w.uniform_bound()


def dominance_slack(u1: MixedTerm, u2: MixedTerm, z: tuple[complex, ...]) -> float:
    """Normalized smallest eigenvalue of levi(u1) - levi(u2)."""
    h1 = levi_form(u1, z)
    h2 = levi_form(u2, z)
    scale = 1.0 + h1.trace() + h2.trace()
    return hermitian_min_eigenvalue(h1.minus(h2)) / scale


def reevaluate_margin(
    record: CheckRecord,
    *,
    u: MixedTerm | None = None,
    w: WeightFamily | None = None,
    u2: MixedTerm | None = None,
) -> float:
    """Recompute a record's margin from its witness (the reproducibility contract)."""
    if record.witness is None:
        raise ValueError(f"check {record.name!r} has no witness to re-evaluate")
    name = record.name
    if name == "resolve_inequality":
        return resolve_margin(u, w, record.witness, record.delta)
    if name == "weight_psh":
        return psh_slack(u, w, record.witness, record.delta)
    if name == "weight_strip_bound":
        return strip_margin(u, w, record.witness, record.delta)
    if name == "weight_flatness":
        return flatness_defect(u, w, record.witness, record.delta)
    if name == "weight_uniform_bound":
        return uniform_ratio(u, w, record.witness, record.delta)
    if name == "levi_dominance":
        return dominance_slack(u, u2, record.witness)
    raise ValueError(f"check {name!r} is an aggregate without a witness")


# ---------------------------------------------------------------------------
# resolve inequality


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_refine(fn, a: float, b: float, tol: float, max_iter: int = 200):
    """Golden-section descent inside [a, b]; returns the best evaluated point."""
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = fn(x1), fn(x2)
    best = (f1, x1) if f1 <= f2 else (f2, x2)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = fn(x1)
            if f1 < best[0]:
                best = (f1, x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = fn(x2)
            if f2 < best[0]:
                best = (f2, x2)
    return best


def _axis_point(n: int, i: int, value: complex) -> tuple[complex, ...]:
    z = [complex(0.0)] * n
    z[i] = value
    return tuple(z)


def _check_diagonal_model(u: MixedTerm, w: WeightFamily) -> None:
    if any(g.pure_power_coordinate() is None for g in u.generators):
        raise ValueError("resolve check expects a diagonal model (pure powers only)")
    powers = [None] * u.dimension
    for g in u.generators:
        i = g.pure_power_coordinate()
        k = g.exponents[i]
        powers[i] = k if powers[i] is None else min(powers[i], k)
    if tuple(powers) != w.pure_powers:
        raise ValueError(
            f"diagonal model powers {tuple(powers)} do not match the family {w.pure_powers}"
        )


def _resolve_one_delta(u: MixedTerm, w: WeightFamily, plan: SamplePlan, delta: float):
    n = u.dimension
    worst = math.inf
    worst_z = None

    def consider(value, z):
        nonlocal worst, worst_z
        if value < worst:
            worst, worst_z = value, z

    origin = tuple(complex(0.0) for _ in range(n))
    consider(resolve_margin(u, w, origin, delta), origin)
    for i, m in enumerate(w.pure_powers):
        for rho in plan.radial_samples(m, delta):
            if rho == 0.0:
                continue
            z = _axis_point(n, i, complex(rho))
            consider(resolve_margin(u, w, z, delta), z)
        # refine around the coarse minimizer of the tau-scaled grid so the
        # recorded margin tracks the true infimum, not the grid resolution
        scaled = plan.scaled_radii(m, delta)
        if len(scaled) >= 3:
            values = [resolve_margin(u, w, _axis_point(n, i, complex(r)), delta) for r in scaled]
            j = values.index(min(values))
            lo = scaled[max(j - 1, 0)]
            hi = scaled[min(j + 1, len(scaled) - 1)]
            if hi > lo:
                t = tau(delta, m)

                def fn(rho, _i=i):
                    return resolve_margin(u, w, _axis_point(n, _i, complex(rho)), delta)

                f_best, rho_best = _golden_refine(fn, lo, hi, tol=1e-6 * t)
                consider(f_best, _axis_point(n, i, complex(rho_best)))
    return worst, worst_z


def check_resolve(u: MixedTerm, w: WeightFamily, plan: SamplePlan, threads: int = 1):
    """Per delta: min over the plan of min-eig(resolve) * delta^(2 eps) >= C (1 - 1e-6),
    plus one aggregate record asserting the margins are delta-invariant."""
    _check_diagonal_model(u, w)
    worker = partial(_resolve_one_delta, u, w, plan)
    results = _map_deltas(worker, plan.delta_sweep, threads)
    records = []
    threshold = w.C * (1.0 - RESOLVE_TOLERANCE)
    margins = []
    for delta, (worst, worst_z) in zip(plan.delta_sweep, results):
        margins.append(worst)
        records.append(
            CheckRecord("resolve_inequality", worst >= threshold, worst, worst_z, delta)
        )
    spread = _relative_spread(margins)
    records.append(
        CheckRecord("resolve_margin_stability", spread <= RESOLVE_STABILITY, spread, None, None)
    )
    return records


def _relative_spread(values) -> float:
    lo, hi = min(values), max(values)
    if lo <= 0.0:
        return math.inf
    return (hi - lo) / lo


# ---------------------------------------------------------------------------
# weight family checks


def _joint_directions(plan: SamplePlan, n: int):
    """Seeded joint directions, drawn once so every delta sees the same set.

    Returns (scaled, absolute): scaled entries are s-vectors in units of
    tau_i(delta); absolute entries are plain radii.  Both carry phases.
    """
    rng = random.Random(plan.seed)
    count = max(8, plan.radial_points // 4)
    scaled = []
    absolute = []
    for _ in range(count):
        svec = tuple(rng.uniform(0.0, SCALED_GRID_MAX) for _ in range(n))
        phases = tuple(
            complex(math.cos(a), math.sin(a))
            for a in (rng.uniform(0.0, 2.0 * math.pi) for _ in range(n))
        )
        scaled.append((svec, phases))
    for _ in range(count):
        rvec = tuple(rng.uniform(0.0, plan.radius) for _ in range(n))
        phases = tuple(
            complex(math.cos(a), math.sin(a))
            for a in (rng.uniform(0.0, 2.0 * math.pi) for _ in range(n))
        )
        absolute.append((rvec, phases))
    return scaled, absolute


def _weight_sample_zs(plan: SamplePlan, w: WeightFamily, delta: float, joint):
    n = w.dimension
    zs = [tuple(complex(0.0) for _ in range(n))]
    phases = plan.phases()
    for i, m in enumerate(w.pure_powers):
        for rho in plan.weight_radii(m, delta):
            if rho == 0.0:
                continue
            for ph in phases:
                zs.append(_axis_point(n, i, rho * ph))
    scaled, absolute = joint
    taus = [tau(delta, m) for m in w.pure_powers]
    for svec, phs in scaled:
        z = tuple(
            min(s * t, plan.radius) * ph for s, t, ph in zip(svec, taus, phs)
        )
        zs.append(z)
    for rvec, phs in absolute:
        zs.append(tuple(r * ph for r, ph in zip(rvec, phs)))
    return zs


def _ambient_at_level(u: MixedTerm, z: tuple[complex, ...], level: float, delta: float) -> AmbientPoint:
    # choose Re z_last so that r = 2 Re z_last + u(z) hits level * delta;
    # Im z_last = 0 by the proven last-coordinate invariance
    target = level * delta
    return AmbientPoint(z, complex((target - eval_mixed(u, z)) / 2.0, 0.0))


def _weight_one_delta(u: MixedTerm, w: WeightFamily, plan: SamplePlan, joint, delta: float):
    strip_set = [lvl for lvl in plan.strip_levels if -1.0 < lvl <= 0.0]
    flat_set = [lvl for lvl in plan.strip_levels if lvl <= -3.0]
    psh_set = strip_set + flat_set + list(PSH_MID_LEVELS) + list(PSH_POSITIVE_LEVELS)

    zs = _weight_sample_zs(plan, w, delta, joint)
    worst_psh = (math.inf, None)
    worst_strip = (math.inf, None)
    worst_flat = (-math.inf, None)
    worst_uniform = (-math.inf, None)
    for z in zs:
        for level in psh_set:
            point = _ambient_at_level(u, z, level, delta)
            slack = psh_slack(u, w, point, delta)
            if slack < worst_psh[0]:
                worst_psh = (slack, point)
            ratio = uniform_ratio(u, w, point, delta)
            if ratio > worst_uniform[0]:
                worst_uniform = (ratio, point)
            if -1.0 < level <= 0.0:
                margin = strip_margin(u, w, point, delta)
                if margin < worst_strip[0]:
                    worst_strip = (margin, point)
            if level <= -3.0:
                defect = flatness_defect(u, w, point, delta)
                if defect > worst_flat[0]:
                    worst_flat = (defect, point)
    return worst_psh, worst_strip, worst_flat, worst_uniform


def check_weight_family(u: MixedTerm, w: WeightFamily, plan: SamplePlan, threads: int = 1):
    """Per delta: plurisubharmonicity on the delta-neighborhood, the strip
    Hessian bound, exact flatness below r = -3 delta, and the uniform bound;
    plus one aggregate record for the stability of the measured strip constant."""
    joint = _joint_directions(plan, w.dimension)
    worker = partial(_weight_one_delta, u, w, plan, joint)
    results = _map_deltas(worker, plan.delta_sweep, threads)
    floor = strip_constant_floor(w)
    records = []
    strip_constants = []
    for delta, (psh, strip, flat, uniform) in zip(plan.delta_sweep, results):
        records.append(CheckRecord("weight_psh", psh[0] >= PSH_FLOOR, psh[0], psh[1], delta))
        records.append(
            CheckRecord("weight_strip_bound", strip[0] >= floor, strip[0], strip[1], delta)
        )
        strip_constants.append(strip[0])
        records.append(
            CheckRecord("weight_flatness", flat[0] == 0.0, flat[0], flat[1], delta)
        )
        records.append(
            CheckRecord("weight_uniform_bound", uniform[0] <= 1.0, uniform[0], uniform[1], delta)
        )
    spread = _relative_spread(strip_constants)
    records.append(
        CheckRecord("strip_constant_stability", spread < STRIP_STABILITY, spread, None, None)
    )
    return records


def strip_constant_floor(w: WeightFamily) -> float:
    """Asserted floor for the measured strip constant:
    p'(e^-1) * e^-3 * min(1, C) * safety."""
    p1 = w.hinge.deriv(math.exp(-1.0))
    return p1 * min(E_MINUS_3, E_MINUS_3 * w.C) * STRIP_SAFETY


# ---------------------------------------------------------------------------
# dominance


def check_dominance(u1: MixedTerm, u2: MixedTerm, plan: SamplePlan) -> CheckRecord:
    """levi(u1) >= levi(u2) at every sampled z, up to the -1e-9 (1 + trace) floor."""
    if u1.dimension != u2.dimension:
        raise ValueError("mixed terms live in different dimensions")
    n = u1.dimension
    worst = math.inf
    worst_z = None

    def consider(z):
        nonlocal worst, worst_z
        slack = dominance_slack(u1, u2, z)
        if slack < worst:
            worst, worst_z = slack, z

    consider(tuple(complex(0.0) for _ in range(n)))
    phases = plan.phases()
    for i in range(n):
        for rho in plan.absolute_radii():
            for ph in phases:
                consider(_axis_point(n, i, rho * ph))
    rng = random.Random(plan.seed + 1)
    for _ in range(4 * plan.radial_points):
        z = tuple(
            rng.uniform(0.0, plan.radius)
            * complex(math.cos(a), math.sin(a))
            for a in (rng.uniform(0.0, 2.0 * math.pi) for _ in range(n))
        )
        consider(z)
    return CheckRecord("levi_dominance", worst >= DOMINANCE_FLOOR, worst, worst_z, None)


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class Certificate:
    """Outcome of a verification campaign."""

    problem_digest: str
    type_report: TypeReport | None
    constants: dict
    checks: tuple[CheckRecord, ...]
    overall: bool
    type_error_coordinate: int | None = None  # 0-based, set on infinite type

    @property
    def epsilon(self) -> Fraction | None:
        return None if self.type_report is None else self.type_report.epsilon


def problem_digest(u: MixedTerm, plan: SamplePlan) -> str:
    """Stable digest of the parsed problem and plan (seed included)."""
    parts = [f"n={u.dimension}"]
    for g in u.generators:
        exps = ",".join(str(e) for e in g.exponents)
        parts.append(f"mon:{g.coefficient.real:.17g},{g.coefficient.imag:.17g}:{exps}")
    parts.append(f"radius={plan.radius:.17g}")
    parts.append(f"radial={plan.radial_points}")
    parts.append(f"phases={plan.phase_points}")
    parts.append("deltas=" + ",".join(f"{d:.17g}" for d in plan.delta_sweep))
    parts.append("levels=" + ",".join(f"{v:.17g}" for v in plan.strip_levels))
    parts.append(f"seed={plan.seed}")
    return hashlib.sha256("\n".join(parts).encode()).hexdigest()


def diagonal_comparison_model(u: MixedTerm, powers: tuple[int, ...]) -> MixedTerm:
    """The diagonal model built from u's own minimal pure-power generators.

    For each coordinate, among generators c z_i^{m_i} the largest |c| is
    kept, so the model's Gram sum is a sub-sum of u's and dominance holds
    automatically.
    """
    coefs = []
    for i, m in enumerate(powers):
        best = None
        for g in u.generators:
            if g.pure_power_coordinate() == i and g.exponents[i] == m:
                if best is None or abs(g.coefficient) > abs(best):
                    best = g.coefficient
        if best is None:
            raise ValueError(f"no generator z_{i+1}^{m} in the mixed term")
        coefs.append(best)
    return MixedTerm.diagonal(powers, coefs)


def weight_family_for(u: MixedTerm, report: TypeReport) -> tuple[WeightFamily, MixedTerm]:
    """Family constants adapted to u plus the diagonal comparison model."""
    family = choose_constants(report.pure_powers, build_cutoff())
    diag = diagonal_comparison_model(u, report.pure_powers)
    floor = min(1.0, min(modsq(g.coefficient) for g in diag.generators))
    return rescale_family(family, floor), diag


def certify_epsilon(u: MixedTerm, plan: SamplePlan, threads: int | None = None) -> Certificate:
    """Full pipeline: finite type, weight family, resolve, dominance, weight checks.

    On infinite type the certificate records the failing coordinate and no
    epsilon; any failing check leaves a witness in its record.
    """
    if threads is None:
        threads = int(os.environ.get("PSHCERT_THREADS", "1"))
    digest = problem_digest(u, plan)
    try:
        report = conjecture_bounds(u)
    except NotFiniteType as err:
        rec = CheckRecord("finite_type", False, math.inf, None, None)
        return Certificate(digest, None, {}, (rec,), False, err.coordinate)

    family, diag = weight_family_for(u, report)
    checks: list[CheckRecord] = [CheckRecord("finite_type", True, 0.0, None, None)]
    checks.extend(check_resolve(diag, family, plan, threads))
    checks.append(check_dominance(u, diag, plan))
    checks.extend(check_weight_family(u, family, plan, threads))
    strip_margins = [r.margin for r in checks if r.name == "weight_strip_bound"]
    constants = {
        "c": family.c,
        "d": family.d,
        "C": family.C,
        "M": family.cutoff.derivative_bound,
        "C_prime": family.uniform_bound(),
        "C_dblprime_measured": min(strip_margins),
    }
    overall = all(r.passed for r in checks)
    return Certificate(digest, report, constants, tuple(checks), overall)


# ---------------------------------------------------------------------------
# radial scan rows for plotting


def scan_rows(u: MixedTerm, plan: SamplePlan, delta: float):
    """Per coordinate radial profile of the resolve diagonal at one delta.

    Columns: delta, coordinate (1-based), radius, t = |z|^2/tau^2, the exact
    diagonal entry, the entry with the first term's m^2 factor dropped (the
    coarser printed bound, always a valid lower bound), and the scale-free
    margin exact * delta^(1/m_i).
    """
    report = conjecture_bounds(u)
    family = choose_constants(report.pure_powers, build_cutoff())
    diag = MixedTerm.diagonal(report.pure_powers)
    n = diag.dimension
    rows = []
    for i, m in enumerate(report.pure_powers):
        t_i = tau(delta, m)
        for s in plan.scaled_sgrid():
            rho = s * t_i
            z = _axis_point(n, i, complex(rho))
            exact = resolve_hessian(diag, family, z, delta).entry(i, i).real
            power = 1.0
            for _ in range(2 * m - 2):
                power *= rho
            paper = exact - (m * m - 1.0) * power / delta
            margin = exact * math.exp(math.log(delta) / m)
            rows.append((delta, i + 1, rho, s * s, exact, paper, margin))
    return rows


# ---------------------------------------------------------------------------
# delta-sweep parallelism (results are aggregated in sweep order, so the
# output is identical regardless of worker count)


def _map_deltas(worker, deltas, threads: int):
    if threads <= 1:
        return [worker(d) for d in deltas]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, deltas))
