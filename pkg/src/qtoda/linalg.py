"""Exact nullspaces over ``Field(r)`` by fraction-free Gauss-Jordan elimination.

Rows are cleared of denominators, then reduced with cross-multiplication
(``row_i <- p * row_i - a * row_piv``, after cancelling ``gcd(p, a)``) and
divided by their polynomial content.  No rational-function division happens
until the nullspace vectors are read off.  Pivot choice is deterministic:
columns left to right, and within a column the candidate with the fewest
terms (lowest index on ties).
"""

from __future__ import annotations

from typing import Sequence

from qtoda.algebra import Field, RationalFunction


def _lcm(a, b):
    return a * (b / a.gcd(b))


def _clear_row(row: Sequence[RationalFunction]):
    field = row[0].field
    den = field._one_poly
    for x in row:
        if not x.is_zero():
            den = _lcm(den, x.den)
    return [x.num * (den / x.den) if not x.is_zero() else field._zero_poly for x in row]


def _primitive(row):
    g = None
    for x in row:
        if not x.is_zero():
            g = x if g is None else g.gcd(x)
    if g is None or g.is_one():
        return row
    return [x / g for x in row]


def echelon(matrix: Sequence[Sequence[RationalFunction]]) -> tuple[list[list], list[int]]:
    """Fraction-free reduced echelon form: polynomial rows and pivot columns."""
    if not matrix:
        return [], []
    ncols = len(matrix[0])
    rows = [_primitive(_clear_row(row)) for row in matrix if any(not x.is_zero() for x in row)]
    pivots: list[int] = []
    k = 0
    for c in range(ncols):
        cands = [i for i in range(k, len(rows)) if not rows[i][c].is_zero()]
        if not cands:
            continue
        p = min(cands, key=lambda i: (len(rows[i][c]), i))
        rows[k], rows[p] = rows[p], rows[k]
        prow = rows[k]
        piv = prow[c]
        for i in range(len(rows)):
            if i == k or rows[i][c].is_zero():
                continue
            a = rows[i][c]
            g = piv.gcd(a)
            pf, af = piv / g, a / g
            rows[i] = _primitive([pf * x - af * y for x, y in zip(rows[i], prow)])
        pivots.append(c)
        k += 1
    return rows[:k], pivots


def rank(matrix: Sequence[Sequence[RationalFunction]]) -> int:
    return len(echelon(matrix)[1])


def nullspace(matrix: Sequence[Sequence[RationalFunction]], ncols: int | None = None, field: Field | None = None) -> list[list[RationalFunction]]:
    """Basis of ``{v : M v = 0}``, one vector per free column, in column order.

    The vector for free column ``f`` has ``v_f = 1`` and zero in the other
    free columns.
    """
    if matrix:
        ncols = len(matrix[0])
        field = matrix[0][0].field
    if ncols is None or field is None:
        raise ValueError("an empty matrix needs explicit ncols and field")
    rows, pivots = echelon(matrix)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [field.zero] * ncols
        v[f] = field.one
        for row, c in zip(rows, pivots):
            if not row[f].is_zero():
                v[c] = -field._wrap(row[f]) / field._wrap(row[c])
        basis.append(v)
    return basis
