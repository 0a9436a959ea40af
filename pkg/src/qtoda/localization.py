"""Euler characteristics on quasimap spaces and the factorized generating function.

Conventions
-----------
All characters are written so that ``z >= 0`` gives honest characters in the
inverse variables (``chi(P^z)`` on projective space is the character of
``Sym^z`` of the dual space).  The standard contour-integral form of these
characters uses the opposite orientation; the two are exchanged by the
involution ``Λ -> Λ^-1, q -> q^-1, z -> -z``.  Consequently the factorized
generating function pairs the *dual* series ``J^v = J(Λ^-1, q^-1)``:

    G_d(z) = sum_{d+ + d- = d} q^{z.d+} < J^v_{d+}(q) p^z, J^v_{d-}(q^-1) >.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement, product
from typing import Callable, Sequence

from qtoda.algebra import Field, RationalFunction
from qtoda.flag import LocalizedClass, chi_flag
from qtoda.series import Degree, TruncationError, TwistedSeries, degrees_up_to, solve_jseries


@dataclass(frozen=True)
class WeightedProjectiveData:
    """Torus weights of the vector space whose projectivization is the quasimap space."""

    weights: tuple[RationalFunction, ...]

    def __post_init__(self):
        seen = set()
        for w in self.weights:
            if not w.is_polynomial() or len(w.num) != 1:
                raise ValueError(f"weight {w} is not a monomial")
            if w in seen:
                raise ValueError(f"repeated weight {w}: fixed points are not isolated")
            seen.add(w)

    @property
    def field(self) -> Field:
        return self.weights[0].field

    def __len__(self):
        return len(self.weights)


def quasimap_weights(r: int, d: int) -> WeightedProjectiveData:
    """The ``(r+1)(d+1)`` weights ``Λ_j q^-m`` (``0 <= j <= r``, ``0 <= m <= d``)."""
    if r < 1 or d < 0:
        raise ValueError(f"need r >= 1 and d >= 0, got r={r}, d={d}")
    field = Field(r)
    q = field.q
    return WeightedProjectiveData(tuple(field.lam(j) * q**-m for m in range(d + 1) for j in range(r + 1)))


def chi_projective(Wd: WeightedProjectiveData, z: int) -> RationalFunction:
    """``chi(P(V); P^z)`` as the fixed-point sum ``sum_f w_f^-z / prod_{g != f} (1 - w_f/w_g)``."""
    field = Wd.field
    total = field.zero
    for f, wf in enumerate(Wd.weights):
        den = field.one
        for g, wg in enumerate(Wd.weights):
            if g != f:
                den = den * (1 - wf / wg)
        total = total + wf ** (-z) / den
    return total


def symmetric_h_oracle(Wd: WeightedProjectiveData, z: int) -> RationalFunction:
    """Complete homogeneous polynomial ``h_z`` of the inverse weights, by enumeration."""
    if z < 0:
        raise ValueError("symmetric_h_oracle needs z >= 0")
    field = Wd.field
    inv = [w.inverse() for w in Wd.weights]
    total = field.zero
    for combo in combinations_with_replacement(range(len(inv)), z):
        term = field.one
        for k in combo:
            term = term * inv[k]
        total = total + term
    return total


# factorized generating function ----------------------------------------


def dual_series(S: TwistedSeries) -> TwistedSeries:
    """``J^v_d = J_d(Λ^-1, q^-1)`` pointwise."""
    return S.map(lambda v: v.invert_variables(lam=True, q=True))


def genfun_G(r: int, z: Sequence[int], D: int, series: TwistedSeries | None = None) -> dict[Degree, RationalFunction]:
    """Coefficients of ``Q^d`` (``|d| <= D``) of the generating function of ``chi(QM_d; P^z)``."""
    z = tuple(int(v) for v in z)
    if len(z) != r:
        raise ValueError(f"z must have length {r}")
    if series is None:
        series = solve_jseries(r, D)
    if series.rank != r:
        raise ValueError(f"series has rank {series.rank}, expected {r}")
    if series.truncation < D:
        raise TruncationError(f"genfun_G needs truncation {D}, series has {series.truncation}")
    field = Field(r)
    q = field.q
    pz = LocalizedClass.p_monomial(r, z)
    plus = {d: series.coeffs[d].map(lambda v: v.invert_variables(lam=True, q=True)) for d in degrees_up_to(r, D)}
    minus = {d: series.coeffs[d].map(lambda v: v.invert_variables(lam=True, q=False)) for d in degrees_up_to(r, D)}
    out = {}
    for d in degrees_up_to(r, D):
        total = field.zero
        for dp in product(*(range(x + 1) for x in d)):
            dm = tuple(a - b for a, b in zip(d, dp))
            twist = q ** sum(a * b for a, b in zip(z, dp))
            total = total + twist * chi_flag(plus[dp] * pz * minus[dm])
        out[d] = total
    return out


# residue formula for r = 2 --------------------------------------------


def _check_simple(weights: Sequence[RationalFunction]) -> None:
    if len(set(weights)) != len(weights):
        raise ArithmeticError("coincident poles: residue formula needs distinct weights")


def iterated_residue(
    weight_lists: Sequence[Sequence[RationalFunction]],
    z: Sequence[int],
    numerator: Callable[[Sequence[RationalFunction]], RationalFunction],
) -> RationalFunction:
    """``prod_k (-1/2πi ∮_{P_k != 0}) prod_k P_k^{z_k - 1} N(P) / prod_{k,w} (1 - P_k w) dP``.

    Each integral is the sum of residues at the simple poles ``P_k = 1/w``;
    the variables separate in the denominator so the order of integration is
    immaterial.
    """
    for ws in weight_lists:
        _check_simple(ws)
    field = weight_lists[0][0].field
    factors = []
    for ws, zk in zip(weight_lists, z):
        col = []
        for f, wf in enumerate(ws):
            den = field.one
            for g, wg in enumerate(ws):
                if g != f:
                    den = den * (1 - wg / wf)
            col.append((wf.inverse(), wf ** (-zk) / den))
        factors.append(col)
    total = field.zero
    for choice in product(*factors):
        point = [c[0] for c in choice]
        weight = field.one
        for c in choice:
            weight = weight * c[1]
        total = total + weight * numerator(point)
    return total


def residue_G_r2_raw(z: Sequence[int], d: Degree, numerator_start: int = 0) -> RationalFunction:
    """The two-variable contour integral for ``r = 2`` in the contour orientation.

    Integrand ``P1^{z1-1} P2^{z2-1} prod_{m=s}^{d1+d2} (1 - P1 P2 q^-m)`` over
    ``prod_j prod_{m<=d1} (1 - P1 Λ_j q^-m) prod_{m<=d2} (1 - P2 Λ_j^-1 q^-m)``.
    """
    d1, d2 = d
    if d1 < 0 or d2 < 0:
        raise ValueError("degree must be componentwise >= 0")
    field = Field(2)
    q = field.q
    w1 = [field.lam(j) * q**-m for m in range(d1 + 1) for j in range(3)]
    w2 = [field.lam(j, -1) * q**-m for m in range(d2 + 1) for j in range(3)]

    def numerator(point):
        P1, P2 = point
        out = field.one
        for m in range(numerator_start, d1 + d2 + 1):
            out = out * (1 - P1 * P2 * q**-m)
        return out

    return iterated_residue([w1, w2], z, numerator)


def residue_G_r2(z: Sequence[int], d: Degree, numerator_start: int = 0) -> RationalFunction:
    """``chi(QM_d; P^z)`` for ``r = 2`` from the residue formula, in the character orientation."""
    z = tuple(int(v) for v in z)
    raw = residue_G_r2_raw((-z[0], -z[1]), tuple(d), numerator_start)
    return raw.invert_variables(lam=True, q=True)
