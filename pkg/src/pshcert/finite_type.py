"""Combinatorics of the monomial ideal attached to a mixed term.

Minimal pure powers, the 1-type, the staircase count of standard monomials,
and a brute-force oracle that probes vanishing orders along monomial curves.
Everything here is exact integer or rational arithmetic; coefficients never
influence any output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .monomials import MixedTerm

DEFAULT_ENUMERATION_BUDGET = 10**8


class NotFiniteType(Exception):
    """Some coordinate has no pure-power generator, so the 1-type is infinite.

    ``coordinate`` is the 0-based index of the first such coordinate.
    """

    def __init__(self, coordinate: int):
        self.coordinate = coordinate
        super().__init__(
            f"no pure power of z_{coordinate + 1} among the generators; "
            "the origin has infinite 1-type"
        )


class MultiplicityBudgetError(Exception):
    """The staircase bounding box exceeds the enumeration budget."""


@dataclass(frozen=True)
class TypeReport:
    """Pure powers m_i, 1-type T, staircase multiplicity, and the bounds they imply."""

    pure_powers: tuple[int, ...]
    one_type: int
    multiplicity: int
    epsilon: Fraction
    lower_bound: Fraction
    upper_bound: Fraction

    def __post_init__(self):
        m_max = max(self.pure_powers)
        if self.one_type != 2 * m_max:
            raise ValueError("one_type must equal twice the largest pure power")
        if self.epsilon != Fraction(1, self.one_type):
            raise ValueError("epsilon must equal 1 / one_type")
        if self.multiplicity < m_max:
            raise ValueError("multiplicity below the largest pure power is impossible")
        if not self.lower_bound <= self.epsilon <= self.upper_bound:
            raise ValueError("bounds must sandwich epsilon")


@dataclass(frozen=True)
class MonomialCurve:
    """t -> (t^{a_1}, ..., t^{a_n}) with a_i = 0 meaning the coordinate is 0."""

    exponents: tuple[int, ...]

    def __post_init__(self):
        if not any(self.exponents):
            raise ValueError("curve needs a nonempty support")
        for a in self.exponents:
            if not isinstance(a, int) or a < 0:
                raise ValueError("curve exponents must be nonnegative integers")

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, a in enumerate(self.exponents) if a > 0)


def minimal_pure_powers(u: MixedTerm) -> tuple[int, ...]:
    """Smallest k per coordinate with some generator z_i^k; NotFiniteType if a coordinate has none."""
    best: list[int | None] = [None] * u.dimension
    for g in u.generators:
        i = g.pure_power_coordinate()
        if i is None:
            continue
        k = g.exponents[i]
        if best[i] is None or k < best[i]:
            best[i] = k
    for i, k in enumerate(best):
        if k is None:
            raise NotFiniteType(i)
    return tuple(best)  # type: ignore[arg-type]


def dangelo_type(u: MixedTerm) -> int:
    """T = 2 max_i m_i, consistent with the |z|^{2m} model (type 2m)."""
    return 2 * max(minimal_pure_powers(u))


def multiplicity(u: MixedTerm, budget: int = DEFAULT_ENUMERATION_BUDGET) -> int:
    """Number of standard monomials: lattice points of the box prod [0, m_i)
    not divisible by any generator exponent.

    Every standard monomial of the ideal lies in this box because the pure
    powers z_i^{m_i} are generators.
    """
    m = minimal_pure_powers(u)
    cells = math.prod(m)
    if cells > budget:
        raise MultiplicityBudgetError(
            f"staircase box has {cells} cells, over the budget of {budget}"
        )
    grid = np.ones(m, dtype=bool)
    for g in u.generators:
        if all(e < size for e, size in zip(g.exponents, m)):
            grid[tuple(slice(e, None) for e in g.exponents)] = False
    return int(grid.sum())


def curve_vanishing_ratio(u: MixedTerm, curve: MonomialCurve):
    """Vanishing order of u pulled back along the curve over the curve's multiplicity.

    With the last ambient coordinate identically zero, u composed with the
    curve is a sum of |t|-powers with positive coefficients, so its vanishing
    order is 2 min <alpha_j, a> over generators supported inside the curve's
    support.  Returns math.inf when u vanishes identically on the curve.
    """
    if len(curve.exponents) != u.dimension:
        raise ValueError("curve dimension mismatch")
    support = set(curve.support)
    orders = []
    for g in u.generators:
        if any(e > 0 and i not in support for i, e in enumerate(g.exponents)):
            continue
        orders.append(sum(e * a for e, a in zip(g.exponents, curve.exponents)))
    if not orders:
        return math.inf
    return Fraction(2 * min(orders), min(curve.exponents[i] for i in support))


def probe_type(u: MixedTerm, exponent_bound: int) -> Fraction:
    """Largest finite curve ratio over all supports and exponents in [1, bound]."""
    if exponent_bound < 1:
        raise ValueError("exponent bound must be >= 1")
    best = Fraction(0)
    for exps in product(range(exponent_bound + 1), repeat=u.dimension):
        if not any(exps):
            continue
        ratio = curve_vanishing_ratio(u, MonomialCurve(exps))
        if ratio is not math.inf and ratio > best:
            best = ratio
    return best


def conjecture_bounds(u: MixedTerm, budget: int = DEFAULT_ENUMERATION_BUDGET) -> TypeReport:
    """Assemble the full report; the sandwich 1/(2 mult) <= eps <= 1/T is exact."""
    m = minimal_pure_powers(u)
    t = 2 * max(m)
    mult = multiplicity(u, budget=budget)
    eps = Fraction(1, t)
    lower = Fraction(1, 2 * mult)
    upper = Fraction(1, t)
    return TypeReport(
        pure_powers=m,
        one_type=t,
        multiplicity=mult,
        epsilon=eps,
        lower_bound=lower,
        upper_bound=upper,
    )
