"""Torus fixed points of hyperquot schemes and the canonical-class degree bound.

A fixed point is a flag fixed point ``σ`` together with two lower-triangular
``r x r`` matrices ``Δ+``, ``Δ-`` of nonnegative integers.  Rows of each
matrix are nondecreasing and the column sums satisfy
``sum_{i>=j} (m+_ij + m-_ij) = d_{r+1-j}``.  Matrices are stored as tuples of
rows, row ``i`` holding the entries ``m_i1 .. m_ii``.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Sequence

from qtoda.flag import Perm, fixed_points
from qtoda.parallel import parallel_map
from qtoda.series import Degree, TwistedSeries, padded

Triangle = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class HQFixedPoint:
    sigma: Perm
    delta_plus: Triangle
    delta_minus: Triangle

    def as_dict(self) -> dict:
        return {
            "sigma": list(self.sigma),
            "delta_plus": [list(row) for row in self.delta_plus],
            "delta_minus": [list(row) for row in self.delta_minus],
        }


def _check_degree(r: int, d: Sequence[int]) -> Degree:
    d = tuple(int(x) for x in d)
    if len(d) != r:
        raise ValueError(f"degree {d} must have length {r}")
    if any(x < 0 for x in d):
        raise ValueError(f"degree {d} must be componentwise >= 0")
    return d


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Weak compositions of ``total`` into ``parts`` pieces, lexicographically descending."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _columns_to_triangle(cols: list[list[int]], r: int) -> Triangle:
    # cols[j][i - j] is m_{i+1, j+1}
    return tuple(tuple(cols[j][i - j] for j in range(i + 1)) for i in range(r))


def matrix_pairs(r: int, d: Sequence[int]) -> list[tuple[Triangle, Triangle]]:
    """All admissible ``(Δ+, Δ-)`` for degree ``d``, built column by column.

    Column ``j`` inherits lower bounds from column ``j-1`` (row monotonicity);
    the excess over those bounds is a weak composition of what remains of
    ``d_{r+1-j}``.
    """
    d = _check_degree(r, d)
    out = []

    def extend(j, plus_cols, minus_cols):
        if j == r:
            out.append((_columns_to_triangle(plus_cols, r), _columns_to_triangle(minus_cols, r)))
            return
        rows = range(j, r)
        if j == 0:
            lo_plus = [0] * len(rows)
            lo_minus = [0] * len(rows)
        else:
            # previous column holds rows j-1..r-1; drop its first entry
            lo_plus = plus_cols[-1][1:]
            lo_minus = minus_cols[-1][1:]
        budget = d[r - 1 - j] - sum(lo_plus) - sum(lo_minus)
        if budget < 0:
            return
        n = len(rows)
        for excess in _compositions(budget, 2 * n):
            col_plus = [lo + e for lo, e in zip(lo_plus, excess[:n])]
            col_minus = [lo + e for lo, e in zip(lo_minus, excess[n:])]
            extend(j + 1, plus_cols + [col_plus], minus_cols + [col_minus])

    extend(0, [], [])
    return out


def enumerate_hq_fixed_points(r: int, d: Sequence[int]) -> list[HQFixedPoint]:
    """Fixed points of ``HQ_d``, ordered by ``σ`` then by matrix pair."""
    pairs = matrix_pairs(r, d)
    return [HQFixedPoint(sigma, plus, minus) for sigma in fixed_points(r) for plus, minus in pairs]


def is_admissible(r: int, d: Sequence[int], plus: Triangle, minus: Triangle) -> bool:
    """Independent check of the fixed-point constraints on a matrix pair."""
    d = _check_degree(r, d)
    for tri in (plus, minus):
        if len(tri) != r:
            return False
        for i, row in enumerate(tri):
            if len(row) != i + 1 or any(v < 0 for v in row):
                return False
            if any(row[k] > row[k + 1] for k in range(i)):
                return False
    for j in range(r):
        total = sum(plus[i][j] + minus[i][j] for i in range(j, r))
        if total != d[r - 1 - j]:
            return False
    return True


def enumerate_by_filter(r: int, d: Sequence[int]) -> list[HQFixedPoint]:
    """Generate-and-filter oracle over the box ``0 <= m <= |d|``."""
    d = _check_degree(r, d)
    bound = sum(d)
    cells = r * (r + 1) // 2
    shape = [i + 1 for i in range(r)]

    def triangle(flat):
        rows, k = [], 0
        for n in shape:
            rows.append(tuple(flat[k:k + n]))
            k += n
        return tuple(rows)

    pairs = []
    for flat in product(range(bound + 1), repeat=2 * cells):
        plus, minus = triangle(flat[:cells]), triangle(flat[cells:])
        if is_admissible(r, d, plus, minus):
            pairs.append((plus, minus))
    return [HQFixedPoint(sigma, plus, minus) for sigma in fixed_points(r) for plus, minus in pairs]


# canonical class -------------------------------------------------------


def k_d(r: int, d: Sequence[int]) -> int:
    """``|d| + sum_{i=1}^{r+1} (d_i - d_{i-1})^2 / 2`` with ``d_0 = d_{r+1} = 0``."""
    d = _check_degree(r, d)
    pad = padded(d)
    sq = sum((pad[i] - pad[i - 1]) ** 2 for i in range(1, r + 2))
    if sq % 2:
        raise ArithmeticError(f"odd squared-difference sum {sq} for d={d}")
    return sum(d) + sq // 2


@dataclass(frozen=True)
class CanonicalClassData:
    k_d: int
    p_exponents: tuple[int, ...]


def canonical_exponents(r: int, d: Sequence[int]) -> CanonicalClassData:
    """Exponents ``2 - d_{i-1} + 2 d_i - d_{i+1}`` of ``P_i`` and the ``q``-exponent ``k_d``."""
    d = _check_degree(r, d)
    pad = padded(d)
    exps = tuple(2 - pad[i - 1] + 2 * pad[i] - pad[i + 1] for i in range(1, r + 1))
    return CanonicalClassData(k_d(r, d), exps)


# pole gap --------------------------------------------------------------


@dataclass(frozen=True)
class GapRow:
    degree: Degree
    sigma: Perm
    k_d: int
    gap: int

    @property
    def margin(self) -> int:
        return self.gap - self.k_d


@dataclass
class PoleGapReport:
    rank: int
    truncation: int
    rows: list[GapRow] = field(default_factory=list)

    @property
    def failures(self) -> list[GapRow]:
        return [row for row in self.rows if row.margin < 0]

    @property
    def passed(self) -> bool:
        return not self.failures

    def sharp(self) -> bool:
        """True when every bound is attained."""
        return all(row.margin == 0 for row in self.rows)

    def as_records(self) -> list[dict]:
        return [
            {"degree": list(row.degree), "sigma": list(row.sigma), "k_d": row.k_d, "gap": row.gap, "margin": row.margin}
            for row in self.rows
        ]


def verify_pole_gap(S: TwistedSeries) -> PoleGapReport:
    """Compare ``deg_q den - deg_q num`` of every ``J_d^σ`` with ``k_d``."""
    report = PoleGapReport(S.rank, S.truncation)

    def at_degree(d):
        k = k_d(S.rank, d)
        layer = S[d]
        return [GapRow(d, sigma, k, layer[sigma].q_degree_gap()) for sigma in fixed_points(S.rank)]

    for rows in parallel_map(at_degree, S.degrees()):
        report.rows.extend(rows)
    return report


# table export ----------------------------------------------------------

CENSUS_FIELDS = ["degree", "sigma", "delta_plus", "delta_minus", "k_d", "gap"]


def census_table(r: int, d: Sequence[int], series: TwistedSeries | None = None) -> list[dict]:
    """One record per fixed point; ``gap`` is filled from ``series`` when given."""
    d = _check_degree(r, d)
    k = k_d(r, d)
    gaps = {}
    if series is not None:
        layer = series[d]
        gaps = {sigma: layer[sigma].q_degree_gap() for sigma in fixed_points(r)}
    rows = []
    for pt in enumerate_hq_fixed_points(r, d):
        rec = {"degree": list(d), **pt.as_dict(), "k_d": k, "gap": gaps.get(pt.sigma)}
        rows.append(rec)
    return rows


def table_to_json(rows: list[dict]) -> str:
    return json.dumps(rows, indent=2, ensure_ascii=False)


def table_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CENSUS_FIELDS, lineterminator="\n")
    writer.writeheader()
    for rec in rows:
        writer.writerow({
            key: ("" if rec[key] is None else json.dumps(rec[key], separators=(",", ":")) if isinstance(rec[key], list) else rec[key])
            for key in CENSUS_FIELDS
        })
    return buf.getvalue()
