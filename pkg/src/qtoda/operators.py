"""Finite-difference operators in the variables ``Q_i = exp(t_{i-1} - t_i)``.

An operator is a finite sum ``sum c_{m,a} Q^a T_m`` kept in normal order
(multiplications left of translations).  ``T_m = prod_j q^{m_j d/dt_j}`` and
moving a translation past ``Q_i`` costs ``q^{m_{i-1} - m_i}``.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from qtoda.algebra import Field, RationalFunction, parse

Shift = tuple[int, ...]
QExp = tuple[int, ...]


class DifferenceOperator:
    """``sum_{m, a} c_{m,a} Q^a T_m`` with coefficients in ``Field(rank)``."""

    __slots__ = ("rank", "terms")

    def __init__(self, rank: int, terms: Mapping[Shift, Mapping[QExp, object]] | None = None):
        self.rank = rank
        field = Field(rank)
        clean: dict[Shift, dict[QExp, RationalFunction]] = {}
        for shift, poly in (terms or {}).items():
            shift = tuple(int(s) for s in shift)
            if len(shift) != rank + 1:
                raise ValueError(f"shift {shift} must have length {rank + 1}")
            row = {}
            for a, c in poly.items():
                a = tuple(int(x) for x in a)
                if len(a) != rank:
                    raise ValueError(f"Q-exponent {a} must have length {rank}")
                c = field(c)
                if not c.is_zero():
                    row[a] = c
            if row:
                clean[shift] = dict(sorted(row.items()))
        self.terms = dict(sorted(clean.items()))

    # constructors -----------------------------------------------------

    @classmethod
    def identity(cls, rank: int) -> "DifferenceOperator":
        return cls(rank, {(0,) * (rank + 1): {(0,) * rank: 1}})

    @classmethod
    def translation(cls, shift: Iterable[int]) -> "DifferenceOperator":
        shift = tuple(shift)
        rank = len(shift) - 1
        return cls(rank, {shift: {(0,) * rank: 1}})

    @classmethod
    def multiplication(cls, rank: int, poly: Mapping[QExp, object]) -> "DifferenceOperator":
        """Multiplication by the Q-polynomial ``sum c_a Q^a``."""
        return cls(rank, {(0,) * (rank + 1): poly})

    # algebra ----------------------------------------------------------

    @property
    def field(self) -> Field:
        return Field(self.rank)

    def q_degree(self) -> int:
        """Largest total Q-degree among the coefficients."""
        return max((sum(a) for row in self.terms.values() for a in row), default=0)

    def shifts(self) -> list[Shift]:
        return list(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def _combine(self, other: "DifferenceOperator", sign: int) -> "DifferenceOperator":
        if other.rank != self.rank:
            raise ValueError(f"rank mismatch: {self.rank} vs {other.rank}")
        out = {m: dict(row) for m, row in self.terms.items()}
        for m, row in other.terms.items():
            target = out.setdefault(m, {})
            for a, c in row.items():
                target[a] = target.get(a, self.field.zero) + sign * c
        return DifferenceOperator(self.rank, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, c) -> "DifferenceOperator":
        c = self.field(c)
        return DifferenceOperator(self.rank, {m: {a: c * v for a, v in row.items()} for m, row in self.terms.items()})

    def __neg__(self):
        return self.scale(-1)

    def __matmul__(self, other):
        return compose(self, other)

    def __eq__(self, other):
        if not isinstance(other, DifferenceOperator):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash((self.rank, str(self)))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, row in self.terms.items():
            coeff = " + ".join(f"[{c}]{_qmono(a)}" for a, c in row.items())
            parts.append(f"({coeff})*T{list(m)}")
        return " + ".join(parts)

    __repr__ = __str__

    # serialization ----------------------------------------------------

    def to_json(self) -> list[dict]:
        """``[{"shift": [...], "coeff": {Q-monomial: text}}]``."""
        return [
            {"shift": list(m), "coeff": {_qmono(a, empty="1"): str(c) for a, c in row.items()}}
            for m, row in self.terms.items()
        ]

    @classmethod
    def from_json(cls, rank: int, data: list[dict]) -> "DifferenceOperator":
        field = Field(rank)
        terms = {}
        for item in data:
            terms[tuple(item["shift"])] = {
                _parse_qmono(k, rank): parse(v, field) for k, v in item["coeff"].items()
            }
        return cls(rank, terms)


def _qmono(a: QExp, empty: str = "") -> str:
    factors = [f"Q{i + 1}" if e == 1 else f"Q{i + 1}^{e}" for i, e in enumerate(a) if e]
    if not factors:
        return empty
    body = "*".join(factors)
    # display form is appended to a bracketed coefficient
    return body if empty else "*" + body


def _parse_qmono(text: str, rank: int) -> QExp:
    exps = [0] * rank
    if text.strip() == "1":
        return tuple(exps)
    for factor in text.split("*"):
        name, _, e = factor.partition("^")
        exps[int(name.strip()[1:]) - 1] += int(e) if e else 1
    return tuple(exps)


def commutation_power(shift: Shift, a: QExp) -> int:
    """Exponent ``k`` with ``T_shift Q^a = q^k Q^a T_shift``."""
    return sum(ai * (shift[i] - shift[i + 1]) for i, ai in enumerate(a))


def compose(A: DifferenceOperator, B: DifferenceOperator) -> DifferenceOperator:
    """Normal-ordered product ``A ∘ B``."""
    if A.rank != B.rank:
        raise ValueError(f"rank mismatch: {A.rank} vs {B.rank}")
    field = A.field
    q = field.q
    out: dict[Shift, dict[QExp, RationalFunction]] = {}
    for m, arow in A.terms.items():
        for n, brow in B.terms.items():
            shift = tuple(x + y for x, y in zip(m, n))
            target = out.setdefault(shift, {})
            for b_exp, bc in brow.items():
                twist = bc * q ** commutation_power(m, b_exp)
                for a_exp, ac in arow.items():
                    key = tuple(x + y for x, y in zip(a_exp, b_exp))
                    target[key] = target.get(key, field.zero) + ac * twist
    return DifferenceOperator(A.rank, out)


def commutator(A: DifferenceOperator, B: DifferenceOperator) -> DifferenceOperator:
    return compose(A, B) - compose(B, A)


def unit_shift(rank: int, j: int) -> Shift:
    return tuple(1 if k == j else 0 for k in range(rank + 1))


def unit_q(rank: int, i: int) -> QExp:
    """Exponent vector of ``Q_i`` (``1 <= i <= rank``)."""
    return tuple(1 if k == i - 1 else 0 for k in range(rank))


def build_toda_operator(r: int) -> DifferenceOperator:
    """``q^{d/dt_0} + sum_{j>=1} q^{d/dt_j} (1 - Q_j)`` in normal order.

    Each translation acts after the multiplication by ``1 - Q_j``, so the
    normal-ordered coefficient of ``T_{e_j}`` is ``1 - q^-1 Q_j``.
    """
    if r < 1:
        raise ValueError(f"rank must be >= 1, got {r}")
    H = DifferenceOperator.translation(unit_shift(r, 0))
    zero = (0,) * r
    for j in range(1, r + 1):
        factor = DifferenceOperator.multiplication(r, {zero: 1, unit_q(r, j): -1})
        H = H + compose(DifferenceOperator.translation(unit_shift(r, j)), factor)
    return H


def total_translation(r: int) -> DifferenceOperator:
    return DifferenceOperator.translation((1,) * (r + 1))
