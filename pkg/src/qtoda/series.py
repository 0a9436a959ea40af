"""The twisted J-series ``I = p^{ln Q / ln q} sum_d J_d Q^d`` in localized form.

``solve_jseries`` runs the scalar recursion at each fixed point ``sigma``

    [sum_{i=1}^{r+1} x_i (q^{d_i - d_{i-1}} - 1)] J_d
        = sum_{i=1}^{r} x_{i+1} q^{d_{i+1} - d_i} J_{d - 1_i},

with ``x_i = (p_{i-1}^-1 p_i)|sigma = Λ_{sigma(i-1)}^-1`` and ``d_0 = d_{r+1} = 0``.
``apply_operator`` is a separate route: it lets a difference operator act on
the twisted series through the translation factors ``shift_action``.  The
solver never calls it, so ``check_eigen`` compares two independent paths.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from itertools import product
from typing import Iterable, Mapping

from qtoda.algebra import Field, RationalFunction, parse
from qtoda.flag import LocalizedClass, Perm, fixed_points, restrict_p, x_ratio
from qtoda.operators import DifferenceOperator, build_toda_operator
from qtoda.parallel import parallel_map

Degree = tuple[int, ...]


class SolverError(ArithmeticError):
    """The recursion divisor vanished at some ``(sigma, d)``."""


class TruncationError(ValueError):
    """A request needs coefficients beyond the series truncation."""


def degrees_up_to(r: int, D: int) -> list[Degree]:
    """All ``d`` in ``Z_{>=0}^r`` with ``|d| <= D``, ordered by ``(|d|, d)``."""
    if D < 0:
        return []
    out = [d for d in product(range(D + 1), repeat=r) if sum(d) <= D]
    return sorted(out, key=lambda d: (sum(d), d))


def padded(d: Degree) -> list[int]:
    """``[d_0, d_1, ..., d_r, d_{r+1}]`` with zero boundary entries."""
    return [0, *d, 0]


def lower(d: Degree, i: int) -> Degree | None:
    """``d - 1_i`` (``1 <= i <= r``), or ``None`` if it leaves the positive cone."""
    if d[i - 1] == 0:
        return None
    return d[: i - 1] + (d[i - 1] - 1,) + d[i:]


@dataclass
class TwistedSeries:
    """Localized coefficients ``J_d`` for ``|d| <= truncation``."""

    rank: int
    truncation: int
    coeffs: dict[Degree, LocalizedClass] = dc_field(default_factory=dict)

    def __post_init__(self):
        for d in degrees_up_to(self.rank, self.truncation):
            if d not in self.coeffs:
                raise ValueError(f"series missing degree {d}")

    def __getitem__(self, d: Degree) -> LocalizedClass:
        d = tuple(d)
        if sum(d) > self.truncation:
            raise TruncationError(f"degree {d} beyond truncation {self.truncation}")
        return self.coeffs[d]

    def degrees(self) -> list[Degree]:
        return degrees_up_to(self.rank, self.truncation)

    def truncate(self, D: int) -> "TwistedSeries":
        if D > self.truncation:
            raise TruncationError(f"cannot extend truncation {self.truncation} to {D}")
        return TwistedSeries(self.rank, D, {d: self.coeffs[d] for d in degrees_up_to(self.rank, D)})

    def map(self, fn) -> "TwistedSeries":
        return TwistedSeries(self.rank, self.truncation, {d: c.map(fn) for d, c in self.coeffs.items()})

    def scale(self, value) -> "TwistedSeries":
        return TwistedSeries(self.rank, self.truncation, {d: c * value for d, c in self.coeffs.items()})

    def first_difference(self, other: "TwistedSeries", D: int | None = None) -> tuple[Degree, Perm] | None:
        """First ``(d, sigma)`` where the two series disagree, up to ``|d| <= D``."""
        D = min(self.truncation, other.truncation) if D is None else D
        for d in degrees_up_to(self.rank, D):
            for sigma in fixed_points(self.rank):
                if self.coeffs[d][sigma] != other.coeffs[d][sigma]:
                    return d, sigma
        return None

    def __eq__(self, other):
        if not isinstance(other, TwistedSeries):
            return NotImplemented
        return (
            self.rank == other.rank
            and self.truncation == other.truncation
            and self.first_difference(other) is None
        )

    # JSON -------------------------------------------------------------

    def to_dict(self) -> dict:
        cells = []
        for d in self.degrees():
            for sigma in fixed_points(self.rank):
                v = self.coeffs[d][sigma]
                cells.append({"degree": list(d), "sigma": list(sigma), "num": v.num_str(), "den": v.den_str()})
        return {"rank": self.rank, "truncation": self.truncation, "coefficients": cells}

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, **kwargs)

    @classmethod
    def from_dict(cls, data: Mapping) -> "TwistedSeries":
        r = int(data["rank"])
        field = Field(r)
        values: dict[Degree, dict[Perm, RationalFunction]] = {}
        for cell in data["coefficients"]:
            d = tuple(cell["degree"])
            sigma = tuple(cell["sigma"])
            values.setdefault(d, {})[sigma] = parse(cell["num"], field) / parse(cell["den"], field)
        coeffs = {d: LocalizedClass(r, vals) for d, vals in values.items()}
        return cls(r, int(data["truncation"]), coeffs)

    @classmethod
    def from_json(cls, text: str) -> "TwistedSeries":
        return cls.from_dict(json.loads(text))


# the translation side ------------------------------------------------


def shift_action(j: int, d: Degree, sigma: Perm, field: Field | None = None) -> RationalFunction:
    """Factor by which ``q^{d/dt_j}`` multiplies the twisted term ``p^{ln Q/ln q} Q^d``.

    Equals ``(p_{j+1} p_j^-1)|sigma * q^{d_{j+1} - d_j}``.
    """
    r = len(sigma) - 1
    if not 0 <= j <= r:
        raise IndexError(f"translation index {j} out of range 0..{r}")
    field = field or Field(r)
    dd = padded(tuple(d))
    return x_ratio(sigma, j + 1, field) * field.q ** (dd[j + 1] - dd[j])


def translation_factor(shift: Iterable[int], d: Degree, sigma: Perm, field: Field) -> RationalFunction:
    result = field.one
    for j, m in enumerate(shift):
        if m:
            result = result * shift_action(j, d, sigma, field) ** m
    return result


def apply_operator(D: DifferenceOperator, S: TwistedSeries) -> TwistedSeries:
    """Coefficients of ``D I`` where ``I`` is the twisted series of ``S``.

    The result is truncated at ``S.truncation - D.q_degree()``.
    """
    if D.rank != S.rank:
        raise ValueError(f"rank mismatch: operator {D.rank}, series {S.rank}")
    budget = S.truncation - D.q_degree()
    if budget < 0:
        raise TruncationError(
            f"operator of Q-degree {D.q_degree()} needs truncation >= {D.q_degree()}, series has {S.truncation}"
        )
    r = S.rank
    field = Field(r)
    points = fixed_points(r)

    def at_point(sigma):
        out = {}
        for e in degrees_up_to(r, budget):
            total = field.zero
            for shift, row in D.terms.items():
                for a, c in row.items():
                    src = tuple(x - y for x, y in zip(e, a))
                    if min(src) < 0:
                        continue
                    total = total + c * translation_factor(shift, src, sigma, field) * S.coeffs[src][sigma]
            out[e] = total
        return out

    per_point = dict(zip(points, parallel_map(at_point, points)))
    coeffs = {
        e: LocalizedClass(r, {sigma: per_point[sigma][e] for sigma in points})
        for e in degrees_up_to(r, budget)
    }
    return TwistedSeries(r, budget, coeffs)


# the recursion side --------------------------------------------------


def recursion_divisor(sigma: Perm, d: Degree, q: RationalFunction) -> RationalFunction:
    """``sum_{i=1}^{r+1} x_i|sigma (q^{d_i - d_{i-1}} - 1)``."""
    r = len(sigma) - 1
    field = q.field
    dd = padded(d)
    total = field.zero
    for i in range(1, r + 2):
        total = total + x_ratio(sigma, i, field) * (q ** (dd[i] - dd[i - 1]) - 1)
    return total


def _solve_at(sigma: Perm, r: int, D: int, q: RationalFunction) -> dict[Degree, RationalFunction]:
    field = q.field
    J: dict[Degree, RationalFunction] = {}
    for d in degrees_up_to(r, D):
        if sum(d) == 0:
            J[d] = field.one
            continue
        dd = padded(d)
        rhs = field.zero
        for i in range(1, r + 1):
            src = lower(d, i)
            if src is None:
                continue
            rhs = rhs + x_ratio(sigma, i + 1, field) * q ** (dd[i + 1] - dd[i]) * J[src]
        divisor = recursion_divisor(sigma, d, q)
        if divisor.is_zero():
            raise SolverError(f"recursion divisor vanishes at sigma={sigma}, d={d}")
        J[d] = rhs / divisor
    return J


def solve_jseries(r: int, D: int, q: RationalFunction | None = None) -> TwistedSeries:
    """Coefficients ``J_d`` (``|d| <= D``) from the recursion with ``J_0 = 1``.

    ``q`` may be replaced by any element of ``Field(r)`` (e.g. ``q^-1``).
    """
    if r < 1:
        raise ValueError(f"rank must be >= 1, got {r}")
    if D < 0:
        raise ValueError(f"truncation must be >= 0, got {D}")
    field = Field(r)
    q = field.q if q is None else field(q)
    points = fixed_points(r)
    solved = dict(zip(points, parallel_map(lambda s: _solve_at(s, r, D, q), points)))
    coeffs = {d: LocalizedClass(r, {s: solved[s][d] for s in points}) for d in degrees_up_to(r, D)}
    return TwistedSeries(r, D, coeffs)


def linear_term(sigma: Perm, i: int, field: Field | None = None) -> RationalFunction:
    """``J_{1_i}|sigma = (1-q)^-1 (1 - p_{i-1}^-1 p_i^2 p_{i+1}^-1 q)^-1``."""
    r = len(sigma) - 1
    field = field or Field(r)

    def p(k):
        return field.one if k in (0, r + 1) else restrict_p(sigma, k, field)

    q = field.q
    return 1 / ((1 - q) * (1 - p(i - 1).inverse() * p(i) ** 2 * p(i + 1).inverse() * q))


# closed forms ----------------------------------------------------------


def closed_form_r1(d: int) -> LocalizedClass:
    """``J_d = prod_{j=0}^{1} prod_{m=1}^{d} (1 - p Λ_j q^m)^-1`` at both fixed points."""
    if d < 0:
        raise ValueError("degree must be >= 0")
    field = Field(1)
    q = field.q

    def value(sigma):
        p = restrict_p(sigma, 1, field)
        den = field.one
        for j in range(2):
            for m in range(1, d + 1):
                den = den * (1 - p * field.lam(j) * q**m)
        return den.inverse()

    return LocalizedClass.from_function(1, value)


def closed_form_r2(d: Degree, numerator_start: int = 1) -> LocalizedClass:
    """The explicit ``r = 2`` coefficient

        prod_{m=s}^{d1+d2} (1 - p1 p2 q^m)
        / prod_j [prod_{m=1}^{d1} (1 - p1 Λ_j q^m) prod_{m=1}^{d2} (1 - p2 Λ_j^-1 q^m)]

    with numerator start ``s`` (1 gives the normalization ``J_0 = 1``).
    """
    d1, d2 = d
    if d1 < 0 or d2 < 0:
        raise ValueError("degree must be componentwise >= 0")
    field = Field(2)
    q = field.q

    def value(sigma):
        p1 = restrict_p(sigma, 1, field)
        p2 = restrict_p(sigma, 2, field)
        num = field.one
        for m in range(numerator_start, d1 + d2 + 1):
            num = num * (1 - p1 * p2 * q**m)
        den = field.one
        for j in range(3):
            lam = field.lam(j)
            for m in range(1, d1 + 1):
                den = den * (1 - p1 * lam * q**m)
            for m in range(1, d2 + 1):
                den = den * (1 - p2 * lam.inverse() * q**m)
        return num / den

    return LocalizedClass.from_function(2, value)


# eigen check -----------------------------------------------------------


def toda_eigenvalue(r: int) -> RationalFunction:
    """``Λ_0^-1 + ... + Λ_r^-1``."""
    field = Field(r)
    total = field.zero
    for j in range(r + 1):
        total = total + field.lam(j, -1)
    return total


@dataclass
class EigenReport:
    rank: int
    checked_truncation: int
    eigenvalue: RationalFunction
    failures: list[tuple[Degree, Perm]]

    @property
    def passed(self) -> bool:
        return not self.failures


def check_eigen(S: TwistedSeries) -> EigenReport:
    """Compare ``H I`` with ``(sum Λ_j^-1) I`` coefficientwise for ``|d| <= D - 1``."""
    H = build_toda_operator(S.rank)
    lhs = apply_operator(H, S)
    lam = toda_eigenvalue(S.rank)
    failures = []
    for d in lhs.degrees():
        for sigma in fixed_points(S.rank):
            if lhs.coeffs[d][sigma] != lam * S.coeffs[d][sigma]:
                failures.append((d, sigma))
    return EigenReport(S.rank, lhs.truncation, lam, failures)
