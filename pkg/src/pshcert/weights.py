"""Cutoff-based weight families with explicit constants.

The family combines one fixed smooth transition chi (identity below 1/2,
zero above 1), per-coordinate scales tau_i(delta) = delta^(1/(2 m_i)), the
bump sum rho_delta(z) = c sum_i chi(|z_i|^2 / tau_i^2), and a convex C^2
hinge p applied to the pre-weight exp(r/delta) + e^-3 rho_delta.  The
constants (M, c, d, C) are chosen so that the scaled Hessian lower bound

    min eig of (levi(u)/delta + hess rho_delta) >= C * delta^(-1/max m_i)

holds on every regime of |z_i| with a margin independent of delta.  All
Hessians here are assembled analytically; the finite-difference oracle in
the certify module cross-checks them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .monomials import (
    AmbientPoint,
    HermitianForm,
    MixedTerm,
    ambient_holomorphic_gradient,
    defining_function,
    levi_form,
    mixed_gradient,
    modsq,
)

E_MINUS_3 = math.exp(-3.0)
EXP_SATURATION = -700.0  # exp underflows harmlessly; everything below is flat anyway


def saturated_exp(x: float) -> float:
    """exp(x) with hard saturation to 0 below the underflow guard."""
    return 0.0 if x < EXP_SATURATION else math.exp(x)


def _glue(x: float) -> float:
    # exp(-1/x) for x > 0, identically 0 otherwise; smooth at 0
    return math.exp(-1.0 / x) if x > 0.0 else 0.0


def _glue_d1(x: float) -> float:
    if x <= 0.0:
        return 0.0
    return _glue(x) / (x * x)


def _glue_d2(x: float) -> float:
    if x <= 0.0:
        return 0.0
    return _glue(x) * (1.0 - 2.0 * x) / (x * x * x * x)


def _transition(t: float) -> tuple[float, float, float]:
    """chi(t), chi'(t), chi''(t) for the fixed transition chi(t) = t * s(2(1-t)).

    s(x) = phi(x) / (phi(x) + phi(1-x)) with phi(x) = exp(-1/x) is the
    standard smoothstep glue: s = 1 for x >= 1, s = 0 for x <= 0.  Hence
    chi(t) = t exactly for t <= 1/2 and chi(t) = 0 exactly for t >= 1.
    """
    if t <= 0.5:
        return t, 1.0, 0.0
    if t >= 1.0:
        return 0.0, 0.0, 0.0
    x = 2.0 * (1.0 - t)
    g = _glue(x)
    h = _glue(1.0 - x)
    gd1 = _glue_d1(x)
    hd1 = -_glue_d1(1.0 - x)
    gd2 = _glue_d2(x)
    hd2 = _glue_d2(1.0 - x)
    den = g + h
    s = g / den
    num = gd1 * h - g * hd1
    s1 = num / (den * den)
    num1 = gd2 * h - g * hd2
    den1 = gd1 + hd1
    s2 = (num1 * den - 2.0 * num * den1) / (den * den * den)
    chi = t * s
    chi1 = s - 2.0 * t * s1
    chi2 = -4.0 * s1 + 4.0 * t * s2
    return chi, chi1, chi2


@dataclass(frozen=True)
class Cutoff:
    """The transition evaluator with its measured derivative bound M."""

    derivative_bound: float

    def value(self, t: float) -> float:
        return _transition(t)[0]

    def deriv(self, t: float) -> float:
        return _transition(t)[1]

    def second(self, t: float) -> float:
        return _transition(t)[2]


@lru_cache(maxsize=None)
def build_cutoff(samples: int = 100_001, safety: float = 1.05) -> Cutoff:
    """Measure M = sup |chi'| + |chi''| on [0, 1] over a dense grid.

    M only enters through the smallness of c, so any finite upper estimate
    keeps every inequality valid; the safety factor covers grid resolution.
    """
    worst = 0.0
    step = 1.0 / (samples - 1)
    for k in range(samples):
        _, d1, d2 = _transition(k * step)
        worst = max(worst, abs(d1) + abs(d2))
    return Cutoff(derivative_bound=safety * worst)


@dataclass(frozen=True)
class Hinge:
    """Convex increasing C^2 hinge p(t) = max(t - threshold, 0)^3."""

    threshold: float = math.exp(-2.0)

    def value(self, t: float) -> float:
        s = t - self.threshold
        return s * s * s if s > 0.0 else 0.0

    def deriv(self, t: float) -> float:
        s = t - self.threshold
        return 3.0 * s * s if s > 0.0 else 0.0

    def second(self, t: float) -> float:
        s = t - self.threshold
        return 6.0 * s if s > 0.0 else 0.0


def build_hinge() -> Hinge:
    return Hinge()


@dataclass(frozen=True)
class WeightFamily:
    """The (chi, p, c, d, C, epsilon) bundle defining rho_delta and the weights."""

    pure_powers: tuple[int, ...]
    cutoff: Cutoff
    hinge: Hinge
    c: float
    d: float
    C: float
    epsilon: Fraction

    @property
    def dimension(self) -> int:
        return len(self.pure_powers)

    def uniform_bound(self) -> float:
        """C' = p(e + e^-3), the largest weight value on the delta-neighborhood."""
        return self.hinge.value(math.e + E_MINUS_3)


def choose_constants(pure_powers: tuple[int, ...], cutoff: Cutoff) -> WeightFamily:
    """Fix c, d, C for the given powers.

    c = min(2^-max(m)/M, 1/n) keeps every transition-regime coefficient
    2^(1-m_i) - cM positive and the bump sum rho_delta below 1; C = min(1, c, d)
    is the uniform Hessian margin across all three radial regimes.
    """
    if not pure_powers or any(m < 1 for m in pure_powers):
        raise ValueError("pure powers must be positive integers")
    n = len(pure_powers)
    m_max = max(pure_powers)
    big_m = cutoff.derivative_bound
    c = min(2.0 ** (-m_max) / big_m, 1.0 / n)
    d = min(2.0 ** (1 - m) - c * big_m for m in pure_powers)
    if d <= 0.0:
        raise ValueError("transition margin d must be positive")
    cap = min(1.0, c, d)
    return WeightFamily(
        pure_powers=tuple(pure_powers),
        cutoff=cutoff,
        hinge=build_hinge(),
        c=c,
        d=d,
        C=cap,
        epsilon=Fraction(1, 2 * m_max),
    )


def rescale_family(family: WeightFamily, floor: float) -> WeightFamily:
    """Shrink the constants for a diagonal model whose coefficients dip below 1.

    With a_min = min_i min(1, |c_i|^2), replacing (c, d) by a_min (c, d)
    keeps every regime bound valid for sum_i |c_i z_i^{m_i}|^2.
    """
    if not 0.0 < floor <= 1.0:
        raise ValueError("rescale floor must be in (0, 1]")
    if floor == 1.0:
        return family
    c = family.c * floor
    d = family.d * floor
    return WeightFamily(
        pure_powers=family.pure_powers,
        cutoff=family.cutoff,
        hinge=family.hinge,
        c=c,
        d=d,
        C=min(1.0, c, d),
        epsilon=family.epsilon,
    )


def tau(delta: float, m_i: int) -> float:
    """The coordinate scale delta^(1/(2 m_i))."""
    if not 0.0 < delta <= 1.0:
        raise ValueError(f"delta must lie in (0, 1], got {delta}")
    return delta ** (1.0 / (2.0 * m_i))


def delta_two_eps(delta: float, epsilon: Fraction) -> float:
    """delta^(2 epsilon), computed as exp(2 eps ln delta) for reproducibility."""
    return math.exp(2.0 * float(epsilon) * math.log(delta))


def rho_delta(w: WeightFamily, z: tuple[complex, ...], delta: float) -> float:
    """c sum_i chi(|z_i|^2 / tau_i^2); lies in [0, n c] and n c <= 1."""
    total = 0.0
    for zi, m in zip(z, w.pure_powers):
        ti = tau(delta, m)
        total += w.cutoff.value(modsq(zi) / (ti * ti))
    return w.c * total


def rho_gradient(w: WeightFamily, z: tuple[complex, ...], delta: float) -> tuple[complex, ...]:
    """Holomorphic gradient of rho_delta; d|z|^2/dz = conj(z)."""
    out = []
    for zi, m in zip(z, w.pure_powers):
        ti = tau(delta, m)
        tsq = ti * ti
        d1 = w.cutoff.deriv(modsq(zi) / tsq)
        out.append(w.c * d1 / tsq * zi.conjugate())
    return tuple(out)


def rho_hessian(w: WeightFamily, z: tuple[complex, ...], delta: float) -> HermitianForm:
    """Diagonal complex Hessian of rho_delta.

    Entry i is c (chi'(t_i)/tau_i^2 + chi''(t_i) |z_i|^2 / tau_i^4) with
    t_i = |z_i|^2 / tau_i^2; it vanishes exactly once |z_i| >= tau_i.
    """
    diag = []
    for zi, m in zip(z, w.pure_powers):
        ti = tau(delta, m)
        tsq = ti * ti
        t = modsq(zi) / tsq
        d1 = w.cutoff.deriv(t)
        d2 = w.cutoff.second(t)
        diag.append(w.c * (d1 / tsq + d2 * modsq(zi) / (tsq * tsq)))
    return HermitianForm.diagonal(diag)


def resolve_hessian(
    u: MixedTerm, w: WeightFamily, z: tuple[complex, ...], delta: float
) -> HermitianForm:
    """levi(u)/delta + hess rho_delta, the form whose smallest eigenvalue
    must exceed C delta^(-2 eps)."""
    return levi_form(u, z).scaled(1.0 / delta).plus(rho_hessian(w, z, delta))


def lambda_tilde(u: MixedTerm, w: WeightFamily, p: AmbientPoint, delta: float) -> float:
    """Pre-weight exp(r/delta) + e^-3 rho_delta."""
    r = defining_function(u, p)
    return saturated_exp(r / delta) + E_MINUS_3 * rho_delta(w, p.z, delta)


def lambda_weight(u: MixedTerm, w: WeightFamily, p: AmbientPoint, delta: float) -> float:
    """The weight itself: the hinge applied to the pre-weight.

    Identically zero (exactly, through the hinge) wherever r <= -3 delta,
    because there the pre-weight is at most 2 e^-3 < e^-2.
    """
    return w.hinge.value(lambda_tilde(u, w, p, delta))


def lambda_tilde_gradient(
    u: MixedTerm, w: WeightFamily, p: AmbientPoint, delta: float
) -> tuple[complex, ...]:
    """Ambient holomorphic gradient of the pre-weight (n+1 components)."""
    r = defining_function(u, p)
    exp_r = saturated_exp(r / delta)
    grad_u = mixed_gradient(u, p.z)
    grad_rho = rho_gradient(w, p.z, delta)
    out = [exp_r * gu / delta + E_MINUS_3 * gr for gu, gr in zip(grad_u, grad_rho)]
    out.append(complex(exp_r / delta))
    return tuple(out)


def lambda_tilde_hessian(
    u: MixedTerm, w: WeightFamily, p: AmbientPoint, delta: float
) -> HermitianForm:
    """exp(r/delta) [w w*/delta^2 + hess(u)/delta] + e^-3 hess(rho), padded to n+1.

    w = (u_{z_1}, ..., u_{z_n}, 1) is the ambient gradient of r.
    """
    r = defining_function(u, p)
    exp_r = saturated_exp(r / delta)
    grad_r = ambient_holomorphic_gradient(u, p)
    rank_one = HermitianForm.outer(grad_r).scaled(exp_r / (delta * delta))
    levi_u = levi_form(u, p.z).padded().scaled(exp_r / delta)
    bump = rho_hessian(w, p.z, delta).padded().scaled(E_MINUS_3)
    return rank_one.plus(levi_u).plus(bump)


def lambda_hessian(
    u: MixedTerm, w: WeightFamily, p: AmbientPoint, delta: float
) -> HermitianForm:
    """Complex Hessian of the weight via the chain rule for the hinge:

        hess(p o lt) = p''(lt) g g* + p'(lt) hess(lt),

    g the ambient gradient of the pre-weight lt.  Below the hinge threshold
    both hinge derivatives vanish and the result is the exact zero matrix.
    """
    lt = lambda_tilde(u, w, p, delta)
    p1 = w.hinge.deriv(lt)
    p2 = w.hinge.second(lt)
    if p1 == 0.0 and p2 == 0.0:
        return HermitianForm.zero(u.dimension + 1)
    g = lambda_tilde_gradient(u, w, p, delta)
    return HermitianForm.outer(g).scaled(p2).plus(
        lambda_tilde_hessian(u, w, p, delta).scaled(p1)
    )
