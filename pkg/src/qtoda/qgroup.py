"""Gaussian binomials, the q-binomial theorem, and scalar Serre relations.

Polynomials in an auxiliary variable ``x`` are plain coefficient lists over
``Field(0) = Q(q)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Sequence

from qtoda.algebra import Field, RationalFunction

_F = Field(0)


def _check_range(m: int, k: int) -> None:
    if not 0 <= k <= m:
        raise ValueError(f"q_binomial needs 0 <= k <= m, got m={m}, k={k}")


def q_factorial(m: int, base: RationalFunction | None = None) -> RationalFunction:
    """``(1-q)(1-q^2)...(1-q^m)``."""
    q = _F.q if base is None else base
    out = _F.one
    for i in range(1, m + 1):
        out = out * (1 - q**i)
    return out


def q_binomial(m: int, k: int, base: RationalFunction | None = None) -> RationalFunction:
    """Gaussian binomial as the quotient of q-factorials."""
    _check_range(m, k)
    return q_factorial(m, base) / (q_factorial(k, base) * q_factorial(m - k, base))


@lru_cache(maxsize=None)
def q_binomial_pascal(m: int, k: int, variant: int = 1) -> RationalFunction:
    """Pascal recurrence oracle.

    ``variant=1``: ``[m,k] = [m-1,k-1] + q^k [m-1,k]``;
    ``variant=2``: ``[m,k] = q^{m-k} [m-1,k-1] + [m-1,k]``.
    """
    _check_range(m, k)
    if k == 0 or k == m:
        return _F.one
    q = _F.q
    a, b = q_binomial_pascal(m - 1, k - 1, variant), q_binomial_pascal(m - 1, k, variant)
    if variant == 1:
        return a + q**k * b
    if variant == 2:
        return q ** (m - k) * a + b
    raise ValueError(f"unknown variant {variant}")


def _poly_mul(a: Sequence[RationalFunction], b: Sequence[RationalFunction]) -> list[RationalFunction]:
    out = [_F.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def qbinom_sides(m: int, base: RationalFunction | None = None) -> tuple[list[RationalFunction], list[RationalFunction]]:
    """Coefficient lists in ``x`` of ``prod_{l<m} (1 - q^l x)`` and of its binomial expansion."""
    if m < 0:
        raise ValueError("m must be >= 0")
    q = _F.q if base is None else base
    lhs = [_F.one]
    for l in range(m):
        lhs = _poly_mul(lhs, [_F.one, -(q**l)])
    rhs = [(-1) ** k * q_binomial(m, k, q) * q ** (k * (k - 1) // 2) for k in range(m + 1)]
    return lhs, rhs


def verify_qbinom_identity(m: int) -> bool:
    lhs, rhs = qbinom_sides(m)
    return len(lhs) == len(rhs) and all(a == b for a, b in zip(lhs, rhs))


# Serre relations -------------------------------------------------------


@dataclass(frozen=True)
class CartanData:
    """Cartan matrix ``a[j][i]``, symmetrizers ``(α_i, α_i)/2``, offsets ``m_ji - m_ij``."""

    rank: int
    cartan: tuple[tuple[int, ...], ...]
    symmetrizers: tuple[int, ...]
    offsets: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = self.rank
        if len(self.cartan) != n or any(len(row) != n for row in self.cartan):
            raise ValueError("cartan matrix must be rank x rank")
        if len(self.symmetrizers) != n or any(s <= 0 for s in self.symmetrizers):
            raise ValueError("symmetrizers must be positive, one per node")
        for j in range(n):
            for i in range(n):
                if self.offsets[j][i] != -self.offsets[i][j]:
                    raise ValueError("offsets must be antisymmetric")

    @classmethod
    def type_A(cls, r: int, orientation: Sequence[int] | None = None) -> "CartanData":
        """``A_r`` with edge ``(i, i+1)`` oriented by ``orientation[i] = ±1``.

        Orientation ``+1`` sets ``m_{i+1,i} - m_{i,i+1} = +1``.
        """
        if r < 1:
            raise ValueError("rank must be >= 1")
        orientation = tuple(orientation) if orientation is not None else (1,) * (r - 1)
        if len(orientation) != r - 1 or any(o not in (1, -1) for o in orientation):
            raise ValueError(f"orientation needs {r - 1} entries in {{+1, -1}}")
        cartan = [[2 if i == j else -1 if abs(i - j) == 1 else 0 for i in range(r)] for j in range(r)]
        offsets = [[0] * r for _ in range(r)]
        for i, o in enumerate(orientation):
            offsets[i + 1][i] = o
            offsets[i][i + 1] = -o
        return cls(r, tuple(map(tuple, cartan)), (1,) * r, tuple(map(tuple, offsets)))

    def edges(self) -> list[tuple[int, int]]:
        return [(j, i) for j in range(self.rank) for i in range(self.rank) if i != j and self.cartan[j][i] != 0]


def serre_exponent(cd: CartanData, i: int, j: int, sign: int) -> Fraction:
    """``e`` with ``x = q_i^e``, ``e = a_ji ± 2 (m_ji - m_ij) / (α_i, α_i)``."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return Fraction(cd.cartan[j][i]) + sign * Fraction(cd.offsets[j][i], cd.symmetrizers[i])


def serre_scalar_value(cd: CartanData, i: int, j: int, sign: int) -> RationalFunction:
    """The Serre combination ``sum_k (-1)^k [n,k]_{q_i^2} q_i^{k(k-1)} x^k`` for scalar generators.

    Computed in the variable ``b = q_i^{1/N}`` where ``N`` clears the
    denominator of the exponent of ``x``.
    """
    if i == j:
        raise ValueError("Serre relations need i != j")
    e = serre_exponent(cd, i, j, sign)
    n = 1 - cd.cartan[j][i]
    N = e.denominator
    b = _F.q
    qi2 = b ** (2 * N)
    x = b ** int(e * N)
    total = _F.zero
    for k in range(n + 1):
        total = total + (-1) ** k * q_binomial(n, k, qi2) * qi2 ** (k * (k - 1) // 2) * x**k
    return total


def serre_scalar_check(cd: CartanData, i: int, j: int, sign: int) -> bool:
    """True iff one-dimensional (scalar) generators satisfy the ``(i, j)`` Serre relation."""
    return serre_scalar_value(cd, i, j, sign).is_zero()


def serre_root_criterion(cd: CartanData, i: int, j: int, sign: int) -> bool:
    """``x`` is one of ``q_i^{-2l}``, ``0 <= l <= -a_ji``."""
    e = serre_exponent(cd, i, j, sign)
    return e.denominator == 1 and e <= 0 and e % 2 == 0 and -e // 2 <= -cd.cartan[j][i]
