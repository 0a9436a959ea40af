"""Difference operators commuting with the q-Toda operator, and their eigenvalues on ``I``.

The commutant is searched inside a finite ansatz: operators
``sum u_{m,a} Q^a T_m`` with ``m`` in a given shift set and ``|a| <= g``,
with scalar unknowns ``u_{m,a}`` in ``Q(Λ, q)``.  The condition
``[H, D] = 0`` is linear in the unknowns and solved exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from qtoda.algebra import Field, RationalFunction
from qtoda.flag import Perm, fixed_points
from qtoda.linalg import nullspace, rank
from qtoda.operators import DifferenceOperator, QExp, Shift, build_toda_operator, commutator, total_translation
from qtoda.parallel import parallel_map
from qtoda.series import Degree, TruncationError, TwistedSeries, apply_operator


def _q_exponents(r: int, g: int) -> list[QExp]:
    return sorted((a for a in product(range(g + 1), repeat=r) if sum(a) <= g), key=lambda a: (sum(a), a))


@dataclass(frozen=True)
class OperatorAnsatz:
    shifts: tuple[Shift, ...]
    g: int

    def __post_init__(self):
        if self.g < 0:
            raise ValueError("Q-degree bound must be >= 0")
        if not self.shifts:
            raise ValueError("ansatz needs at least one shift")
        n = len(self.shifts[0])
        if any(len(m) != n for m in self.shifts):
            raise ValueError("all shifts must have the same length")
        if len(set(self.shifts)) != len(self.shifts):
            raise ValueError("repeated shift in ansatz")

    @property
    def rank(self) -> int:
        return len(self.shifts[0]) - 1

    @classmethod
    def default(cls, r: int, g: int = 1) -> "OperatorAnsatz":
        """All 0/1 shift vectors with Q-degree at most ``g``."""
        return cls(tuple(sorted(product((0, 1), repeat=r + 1), key=lambda m: (sum(m), m))), g)

    def monomials(self) -> list[tuple[Shift, QExp]]:
        """Unknowns ``(m, a)`` in a fixed order."""
        return [(m, a) for m in self.shifts for a in _q_exponents(self.rank, self.g)]

    def contains(self, D: DifferenceOperator) -> bool:
        allowed = set(self.monomials())
        return all((m, a) in allowed for m, row in D.terms.items() for a in row)


def _vector(D: DifferenceOperator, monos: list[tuple[Shift, QExp]]) -> list[RationalFunction]:
    field = D.field
    return [D.terms.get(m, {}).get(a, field.zero) for m, a in monos]


def _operator(r: int, monos: list[tuple[Shift, QExp]], v: Sequence[RationalFunction]) -> DifferenceOperator:
    terms: dict = {}
    for (m, a), c in zip(monos, v):
        terms.setdefault(m, {})[a] = c
    return DifferenceOperator(r, terms)


def commutant_nullspace(r: int, ansatz: OperatorAnsatz | None = None) -> list[DifferenceOperator]:
    """Echelon basis of the operators in the ansatz commuting with ``H``."""
    ansatz = ansatz or OperatorAnsatz.default(r)
    if ansatz.rank != r:
        raise ValueError(f"ansatz has rank {ansatz.rank}, expected {r}")
    H = build_toda_operator(r)
    field = Field(r)
    monos = ansatz.monomials()
    unit = field.one

    def column(mono):
        m, a = mono
        return commutator(H, DifferenceOperator(r, {m: {a: unit}}))

    cols = parallel_map(column, monos)
    keys = sorted({(m, a) for C in cols for m, row in C.terms.items() for a in row})
    matrix = [[C.terms.get(m, {}).get(a, field.zero) for C in cols] for m, a in keys]
    basis = nullspace(matrix, ncols=len(monos), field=field)
    return [_operator(r, monos, v) for v in basis]


def standard_laws(r: int) -> list[DifferenceOperator]:
    """The identity, ``H`` and the total translation."""
    return [DifferenceOperator.identity(r), build_toda_operator(r), total_translation(r)]


def commutant_search(r: int, ansatz: OperatorAnsatz | None = None) -> list[DifferenceOperator]:
    """Basis of the commutant within the ansatz, led by the standard laws that fit.

    A standard law is kept only if it lies in the span of the computed
    nullspace; the nullspace vectors then extend it to a basis, in echelon
    order.
    """
    ansatz = ansatz or OperatorAnsatz.default(r)
    raw = commutant_nullspace(r, ansatz)
    monos = ansatz.monomials()
    raw_vecs = [_vector(D, monos) for D in raw]
    chosen: list[DifferenceOperator] = []
    vecs: list[list[RationalFunction]] = []
    for law in standard_laws(r):
        if not ansatz.contains(law):
            continue
        v = _vector(law, monos)
        if raw_vecs and rank(raw_vecs + [v]) == len(raw_vecs) and rank(vecs + [v]) == len(vecs) + 1:
            chosen.append(law)
            vecs.append(v)
    for D, v in zip(raw, raw_vecs):
        if len(vecs) == len(raw_vecs):
            break
        if rank(vecs + [v]) == len(vecs) + 1:
            chosen.append(D)
            vecs.append(v)
    return chosen


# eigenvalues -----------------------------------------------------------


@dataclass
class EigenCheck:
    eigenvalue: RationalFunction | None
    checked_truncation: int
    failure: tuple[Degree, Perm] | None = None
    reason: str = ""

    @property
    def passed(self) -> bool:
        return self.failure is None and self.eigenvalue is not None


def verify_common_eigen(D: DifferenceOperator, S: TwistedSeries) -> EigenCheck:
    """Check ``D I = λ I`` on the truncation, reading ``λ`` from the ``Q^0`` layer."""
    if D.rank != S.rank:
        raise ValueError(f"rank mismatch: operator {D.rank}, series {S.rank}")
    budget = S.truncation - D.q_degree()
    if budget < 0:
        raise TruncationError(f"operator needs Q-degree {D.q_degree()}, series has truncation {S.truncation}")
    DI = apply_operator(D, S)
    zero = (0,) * S.rank
    points = fixed_points(S.rank)
    ratios = [DI[zero][sigma] / S[zero][sigma] for sigma in points]
    lam = ratios[0]
    for sigma, ratio in zip(points, ratios):
        if ratio != lam:
            return EigenCheck(None, budget, (zero, sigma), "ratio at Q^0 depends on the fixed point")
    for d in DI.degrees():
        layer, ref = DI[d], S[d]
        for sigma in points:
            if layer[sigma] != lam * ref[sigma]:
                return EigenCheck(lam, budget, (d, sigma), "D I != λ I")
    return EigenCheck(lam, budget)
