"""Torus fixed-point data on the complete flag manifold of C^{r+1}.

Fixed points are permutations ``sigma`` of ``{0..r}`` stored as image tuples.
The Hopf classes restrict as

    p_i|sigma = (Λ_{sigma(0)} ··· Λ_{sigma(i-1)})^-1,

so that ``sum_i (p_{i-1}^-1 p_i)|sigma = sum_j Λ_j^-1`` at every point.  The
Atiyah-Bott sum uses the tangent weights ``Λ_{sigma(j)}/Λ_{sigma(i)}``
(``i < j``) with the factor ``1 - w^-1`` in the denominator; this orientation
is pinned by ``chi(O) = 1`` and ``chi(p_1) = sum_j Λ_j^-1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Callable, Iterable, Mapping

from qtoda.algebra import Field, RationalFunction
from qtoda.parallel import parallel_map

Perm = tuple[int, ...]


def fixed_points(r: int) -> list[Perm]:
    """All ``(r+1)!`` permutations of ``{0..r}`` in lexicographic order."""
    if r < 1:
        raise ValueError(f"rank must be >= 1, got {r}")
    return list(permutations(range(r + 1)))


def _check_perm(sigma: Perm, r: int) -> None:
    if sorted(sigma) != list(range(r + 1)):
        raise ValueError(f"{sigma} is not a permutation of 0..{r}")


def restrict_p(sigma: Perm, i: int, field: Field | None = None) -> RationalFunction:
    """Restriction of the Hopf class ``p_i`` to the fixed point ``sigma``."""
    r = len(sigma) - 1
    field = field or Field(r)
    if not 1 <= i <= r:
        raise IndexError(f"p_{i} undefined for rank {r} (need 1 <= i <= {r})")
    exps = [0] * (r + 1)
    for k in range(i):
        exps[sigma[k]] = -1
    return field.lam_monomial(exps)


def restrict_monomial(sigma: Perm, z: Iterable[int], field: Field | None = None) -> RationalFunction:
    """Restriction of ``p^z = p_1^z_1 ··· p_r^z_r`` to ``sigma``."""
    r = len(sigma) - 1
    field = field or Field(r)
    z = tuple(z)
    if len(z) != r:
        raise ValueError(f"z must have length {r}")
    # p^z|sigma = prod_k Λ_{sigma(k)}^{-(z_{k+1} + ... + z_r)}
    exps = [0] * (r + 1)
    tail = 0
    for k in range(r - 1, -1, -1):
        tail += z[k]
        exps[sigma[k]] = -tail
    return field.lam_monomial(exps)


def x_ratio(sigma: Perm, i: int, field: Field | None = None) -> RationalFunction:
    """``(p_{i-1}^-1 p_i)|sigma = Λ_{sigma(i-1)}^-1`` for ``1 <= i <= r+1``."""
    r = len(sigma) - 1
    field = field or Field(r)
    if not 1 <= i <= r + 1:
        raise IndexError(f"x_{i} undefined for rank {r}")
    return field.lam(sigma[i - 1], -1)


def tangent_weights(sigma: Perm, field: Field | None = None) -> list[RationalFunction]:
    """The ``r(r+1)/2`` weights ``Λ_{sigma(j)} Λ_{sigma(i)}^-1`` for ``i < j``."""
    r = len(sigma) - 1
    field = field or Field(r)
    out = []
    for i in range(r + 1):
        for j in range(i + 1, r + 1):
            exps = [0] * (r + 1)
            exps[sigma[j]] += 1
            exps[sigma[i]] -= 1
            out.append(field.lam_monomial(exps))
    return out


@lru_cache(maxsize=None)
def _euler_denominators(r: int) -> dict[Perm, RationalFunction]:
    field = Field(r)
    out = {}
    for sigma in fixed_points(r):
        den = field.one
        for w in tangent_weights(sigma, field):
            den = den * (1 - w.inverse())
        out[sigma] = den
    return out


@dataclass(frozen=True)
class LocalizedClass:
    """A K-theory class on the flag manifold, stored by its fixed-point values."""

    rank: int
    values: Mapping[Perm, RationalFunction]

    def __post_init__(self):
        expected = set(fixed_points(self.rank))
        if set(self.values) != expected:
            missing = expected - set(self.values)
            raise ValueError(f"localized class incomplete; missing {sorted(missing)[:3]}")

    @property
    def field(self) -> Field:
        return Field(self.rank)

    @classmethod
    def from_function(cls, r: int, fn: Callable[[Perm], RationalFunction]) -> "LocalizedClass":
        return cls(r, {sigma: fn(sigma) for sigma in fixed_points(r)})

    @classmethod
    def constant(cls, r: int, value=1) -> "LocalizedClass":
        v = Field(r)(value)
        return cls.from_function(r, lambda s: v)

    @classmethod
    def p_monomial(cls, r: int, z: Iterable[int]) -> "LocalizedClass":
        z = tuple(z)
        return cls.from_function(r, lambda s: restrict_monomial(s, z))

    def __getitem__(self, sigma: Perm) -> RationalFunction:
        return self.values[tuple(sigma)]

    def map(self, fn: Callable[[RationalFunction], RationalFunction]) -> "LocalizedClass":
        return LocalizedClass(self.rank, {s: fn(v) for s, v in self.values.items()})

    def _zip(self, other: "LocalizedClass", op) -> "LocalizedClass":
        if other.rank != self.rank:
            raise ValueError(f"rank mismatch: {self.rank} vs {other.rank}")
        return LocalizedClass(self.rank, {s: op(v, other.values[s]) for s, v in self.values.items()})

    def __mul__(self, other):
        if isinstance(other, LocalizedClass):
            return self._zip(other, lambda a, b: a * b)
        return self.map(lambda a: a * other)

    __rmul__ = __mul__

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def __eq__(self, other):
        if not isinstance(other, LocalizedClass):
            return NotImplemented
        return self.rank == other.rank and all(v == other.values[s] for s, v in self.values.items())

    def __hash__(self):
        return hash((self.rank, tuple(sorted(self.values.items()))))


def chi_flag(phi: LocalizedClass) -> RationalFunction:
    """Equivariant Euler characteristic by the Atiyah-Bott fixed-point sum."""
    dens = _euler_denominators(phi.rank)
    terms = parallel_map(lambda s: phi.values[s] / dens[s], fixed_points(phi.rank))
    total = phi.field.zero
    for t in terms:
        total = total + t
    return total


def pairing(phi: LocalizedClass, psi: LocalizedClass) -> RationalFunction:
    """K-theoretic Poincaré pairing ``chi(phi ⊗ psi)``."""
    if phi.rank != psi.rank:
        raise ValueError(f"rank mismatch: {phi.rank} vs {psi.rank}")
    return chi_flag(phi * psi)


def _vandermonde_like(exponents: list[int], xs: list[RationalFunction], field: Field) -> RationalFunction:
    # det[x_j^{e_i}] by Leibniz expansion; n <= 4 keeps this cheap
    n = len(xs)
    total = field.zero
    for perm in permutations(range(n)):
        sign = 1
        for a in range(n):
            for b in range(a + 1, n):
                if perm[a] > perm[b]:
                    sign = -sign
        term = field.constant(sign)
        for i in range(n):
            term = term * xs[perm[i]] ** exponents[i]
        total = total + term
    return total


def weyl_character(r: int, z: Iterable[int]) -> RationalFunction:
    """Character of the SU(r+1) irrep with highest weight ``sum z_i omega_i``.

    Computed as a ratio of alternants in the inverse variables ``x_j = Λ_j^-1``,
    matching the restriction convention for ``p^z``.
    """
    z = tuple(int(v) for v in z)
    if len(z) != r:
        raise ValueError(f"z must have length {r}")
    if any(v < 0 for v in z):
        raise ValueError(f"weyl_character: z={z} is not dominant")
    field = Field(r)
    n = r + 1
    lam = [sum(z[i:]) for i in range(r)] + [0]
    xs = [field.lam(j, -1) for j in range(n)]
    num = _vandermonde_like([lam[i] + n - 1 - i for i in range(n)], xs, field)
    den = _vandermonde_like([n - 1 - i for i in range(n)], xs, field)
    return num / den
