"""Monomial mixed terms u(z) = sum_j |f_j(z)|^2 and their exact complex Hessians.

Every generator f_j is a monomial c_j * z^alpha_j, so differentiation stays
inside the monomial class and the Levi form of u is the Gram matrix of the
generator gradients, positive semidefinite by construction.  Coefficients
enter every formula only through |c_j|^2; powers are expanded by iterated
multiplication so results are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

MAX_EXPONENT = 64


def modsq(value: complex) -> float:
    """|value|^2 without the square root (exact for the Gram sums)."""
    return value.real * value.real + value.imag * value.imag


def _ipow(base: complex, exponent: int) -> complex:
    # iterated multiplication, never floating pow: deterministic rounding
    out = complex(1.0, 0.0)
    for _ in range(exponent):
        out = out * base
    return out


@dataclass(frozen=True)
class Monomial:
    """A single generator c * z_1^e_1 ... z_n^e_n with c != 0."""

    coefficient: complex
    exponents: tuple[int, ...]

    def __post_init__(self):
        if self.coefficient == 0:
            raise ValueError("zero coefficient monomial is not representable")
        if not self.exponents:
            raise ValueError("monomial needs at least one coordinate")
        for e in self.exponents:
            if not isinstance(e, int) or e < 0:
                raise ValueError(f"exponents must be nonnegative integers, got {e!r}")
            if e > MAX_EXPONENT:
                raise ValueError(f"exponent {e} exceeds the supported bound {MAX_EXPONENT}")

    @property
    def dimension(self) -> int:
        return len(self.exponents)

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    def pure_power_coordinate(self) -> int | None:
        """Index i when the monomial is c * z_i^k, else None."""
        nonzero = [i for i, e in enumerate(self.exponents) if e > 0]
        return nonzero[0] if len(nonzero) == 1 else None

    def value(self, z: tuple[complex, ...]) -> complex:
        out = complex(self.coefficient)
        for zi, e in zip(z, self.exponents):
            if e:
                out = out * _ipow(zi, e)
        return out


def wirtinger_derivative(f: Monomial, i: int) -> Monomial | None:
    """d f / d z_i.  Returns None (the explicit zero marker) when e_i = 0."""
    if not 0 <= i < f.dimension:
        raise IndexError(f"coordinate index {i} out of range for dimension {f.dimension}")
    e = f.exponents[i]
    if e == 0:
        return None
    exps = list(f.exponents)
    exps[i] = e - 1
    return Monomial(f.coefficient * e, tuple(exps))


@dataclass(frozen=True)
class MixedTerm:
    """u(z) = sum over generators of |f_j(z)|^2, with u(0) = 0."""

    dimension: int
    generators: tuple[Monomial, ...]

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("ambient dimension must be >= 1")
        if not self.generators:
            raise ValueError("mixed term needs at least one generator")
        for g in self.generators:
            if g.dimension != self.dimension:
                raise ValueError(
                    f"generator dimension {g.dimension} != declared dimension {self.dimension}"
                )
            if g.degree == 0:
                raise ValueError("constant generator violates u(0) = 0")

    @classmethod
    def from_monomials(cls, generators) -> "MixedTerm":
        gens = tuple(generators)
        if not gens:
            raise ValueError("mixed term needs at least one generator")
        return cls(gens[0].dimension, gens)

    @classmethod
    def diagonal(cls, powers: tuple[int, ...], coefficients=None) -> "MixedTerm":
        """The model sum_i |c_i z_i^{m_i}|^2 (unit coefficients by default)."""
        n = len(powers)
        if coefficients is None:
            coefficients = (1.0,) * n
        gens = []
        for i, (m, c) in enumerate(zip(powers, coefficients)):
            exps = [0] * n
            exps[i] = m
            gens.append(Monomial(complex(c), tuple(exps)))
        return cls(n, tuple(gens))


@dataclass(frozen=True)
class AmbientPoint:
    """A point (z, z_last) of C^{n+1}; z_last is the distinguished coordinate."""

    z: tuple[complex, ...]
    z_last: complex

    @property
    def dimension(self) -> int:
        return len(self.z) + 1

    def as_tuple(self) -> tuple[complex, ...]:
        return self.z + (self.z_last,)


@dataclass(frozen=True)
class HermitianForm:
    """Dense Hermitian matrix with conjugate symmetry exact by construction.

    Only the upper triangle is ever computed; the lower triangle is the
    mirror conjugate, so entry(i, k) == conj(entry(k, i)) holds exactly.
    """

    entries: tuple[tuple[complex, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.entries)

    def entry(self, i: int, k: int) -> complex:
        return self.entries[i][k]

    @classmethod
    def from_upper(cls, dim: int, fn: Callable[[int, int], complex]) -> "HermitianForm":
        upper = [[complex(0.0)] * dim for _ in range(dim)]
        for i in range(dim):
            for k in range(i, dim):
                upper[i][k] = complex(fn(i, k))
        for i in range(dim):
            for k in range(i):
                upper[i][k] = upper[k][i].conjugate()
        return cls(tuple(tuple(row) for row in upper))

    @classmethod
    def diagonal(cls, values) -> "HermitianForm":
        vals = [float(v) for v in values]
        dim = len(vals)
        return cls.from_upper(dim, lambda i, k: vals[i] if i == k else 0.0)

    @classmethod
    def zero(cls, dim: int) -> "HermitianForm":
        return cls.from_upper(dim, lambda i, k: 0.0)

    @classmethod
    def outer(cls, vec: tuple[complex, ...]) -> "HermitianForm":
        """Rank-one form v v*, entry(i, k) = v_i * conj(v_k)."""
        return cls.from_upper(len(vec), lambda i, k: vec[i] * vec[k].conjugate())

    def scaled(self, s: float) -> "HermitianForm":
        # real scalar keeps conjugate symmetry exact
        s = float(s)
        return HermitianForm(tuple(tuple(s * v for v in row) for row in self.entries))

    def plus(self, other: "HermitianForm") -> "HermitianForm":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        return HermitianForm(
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            )
        )

    def minus(self, other: "HermitianForm") -> "HermitianForm":
        return self.plus(other.scaled(-1.0))

    def padded(self, extra: int = 1) -> "HermitianForm":
        """Embed into a larger form with zero rows/columns appended."""
        dim = self.dim + extra
        zero = complex(0.0)
        rows = [row + (zero,) * extra for row in self.entries]
        rows += [(zero,) * dim for _ in range(extra)]
        return HermitianForm(tuple(rows))

    def trace(self) -> float:
        return sum(self.entries[i][i].real for i in range(self.dim))

    def max_abs(self) -> float:
        return max((abs(v) for row in self.entries for v in row), default=0.0)

    def to_rows(self) -> list[list[complex]]:
        return [list(row) for row in self.entries]


def eval_mixed(u: MixedTerm, z: tuple[complex, ...]) -> float:
    """u(z) = sum_j |c_j|^2 |z^alpha_j|^2, always >= 0."""
    if len(z) != u.dimension:
        raise ValueError(f"point dimension {len(z)} != mixed term dimension {u.dimension}")
    total = 0.0
    for g in u.generators:
        unit = complex(1.0)
        for zi, e in zip(z, g.exponents):
            if e:
                unit = unit * _ipow(zi, e)
        total += modsq(g.coefficient) * modsq(unit)
    return total


def _gradient_rows(u: MixedTerm, z: tuple[complex, ...]):
    """Per generator: (|c|^2, unit monomial value, unit gradient row).

    The unit gradient row holds d(z^alpha)/d z_i = e_i z^(alpha - delta_i);
    coefficients are carried separately as |c|^2 so that every downstream
    quantity is phase independent by construction.
    """
    rows = []
    for g in u.generators:
        unit = complex(1.0)
        for zi, e in zip(z, g.exponents):
            if e:
                unit = unit * _ipow(zi, e)
        grad = []
        for i, e in enumerate(g.exponents):
            if e == 0:
                grad.append(complex(0.0))
                continue
            partial = complex(float(e))
            for k, (zk, ek) in enumerate(zip(z, g.exponents)):
                if k == i:
                    if ek - 1:
                        partial = partial * _ipow(zk, ek - 1)
                elif ek:
                    partial = partial * _ipow(zk, ek)
            grad.append(partial)
        rows.append((modsq(g.coefficient), unit, grad))
    return rows


def levi_form(u: MixedTerm, z: tuple[complex, ...]) -> HermitianForm:
    """The complex Hessian of u: H(i,k) = sum_j (df_j/dz_i)(conj df_j/dz_k).

    A Gram sum of rank-one terms, hence positive semidefinite.
    """
    if len(z) != u.dimension:
        raise ValueError(f"point dimension {len(z)} != mixed term dimension {u.dimension}")
    rows = _gradient_rows(u, z)
    n = u.dimension

    def fn(i, k):
        acc = complex(0.0)
        for weight, _unit, grad in rows:
            acc += weight * (grad[i] * grad[k].conjugate())
        return acc

    return HermitianForm.from_upper(n, fn)


def mixed_gradient(u: MixedTerm, z: tuple[complex, ...]) -> tuple[complex, ...]:
    """Holomorphic gradient (u_{z_1}, ..., u_{z_n})."""
    rows = _gradient_rows(u, z)
    out = []
    for i in range(u.dimension):
        acc = complex(0.0)
        for weight, unit, grad in rows:
            acc += weight * (grad[i] * unit.conjugate())
        out.append(acc)
    return tuple(out)


def defining_function(u: MixedTerm, p: AmbientPoint) -> float:
    """r(z, z_last) = 2 Re(z_last) + u(z); the domain is {r < 0}."""
    return 2.0 * p.z_last.real + eval_mixed(u, p.z)


def ambient_holomorphic_gradient(u: MixedTerm, p: AmbientPoint) -> tuple[complex, ...]:
    """(r_{z_1}, ..., r_{z_n}, r_{z_last}) = (u_{z_1}, ..., u_{z_n}, 1)."""
    return mixed_gradient(u, p.z) + (complex(1.0),)
