import pytest

from qtoda.algebra import Field
from qtoda.conservation import (
    OperatorAnsatz,
    commutant_nullspace,
    commutant_search,
    standard_laws,
    verify_common_eigen,
)
from qtoda.operators import DifferenceOperator, build_toda_operator, commutator, total_translation, unit_q
from qtoda.series import TruncationError, solve_jseries, toda_eigenvalue


def test_default_ansatz():
    a = OperatorAnsatz.default(2)
    assert len(a.shifts) == 8
    assert a.g == 1
    assert len(a.monomials()) == 8 * 3
    assert a.contains(build_toda_operator(2))
    with pytest.raises(ValueError):
        OperatorAnsatz(((0, 1), (0, 1)), 1)
    with pytest.raises(ValueError):
        OperatorAnsatz(((0, 1),), -1)


def test_r1_commutant():
    ansatz = OperatorAnsatz(((0, 0), (1, 0), (0, 1), (1, 1)), 1)
    basis = commutant_search(1, ansatz)
    for law in standard_laws(1):
        assert any(b == law for b in basis)
    assert len(basis) == 3


@pytest.mark.parametrize("r", [1, 2, 3])
def test_commutant_contains_standard_laws(r):
    basis = commutant_search(r)
    assert basis[:3] == standard_laws(r)
    assert len(basis) == len(commutant_nullspace(r))


def test_r2_commutant_dimension_and_commutativity():
    basis = commutant_search(2)
    # id, H, the total translation and the second Hamiltonian
    assert len(basis) == 4
    for A in basis:
        assert commutator(build_toda_operator(2), A).is_zero()
        for B in basis:
            assert commutator(A, B).is_zero()


def test_total_translation_found_for_every_rank():
    for r in (1, 2, 3):
        assert any(b == total_translation(r) for b in commutant_search(r))


def test_restricted_ansatz_without_H():
    # only the zero shift and the total translation: H is not in the span
    ansatz = OperatorAnsatz(((0, 0, 0), (1, 1, 1)), 1)
    basis = commutant_search(2, ansatz)
    assert len(basis) == 2
    assert not any(b == build_toda_operator(2) for b in basis)


@pytest.mark.parametrize("r,D", [(1, 5), (2, 4), (3, 3)])
def test_toda_eigenvalue(r, D):
    res = verify_common_eigen(build_toda_operator(r), solve_jseries(r, D))
    assert res.passed
    assert res.eigenvalue == toda_eigenvalue(r)
    assert res.checked_truncation == D - 1


def test_total_translation_eigenvalue_is_one():
    res = verify_common_eigen(total_translation(2), solve_jseries(2, 3))
    assert res.passed and res.eigenvalue == Field(2).one


def test_commutant_eigenvalues_r2():
    S = solve_jseries(2, 4)
    F = Field(2)
    eigen = [verify_common_eigen(D, S) for D in commutant_search(2)]
    assert all(e.passed for e in eigen)
    # the second Hamiltonian acts by the second elementary symmetric function of Λ^-1
    assert eigen[3].eigenvalue == F.lam(0) + F.lam(1) + F.lam(2)


def test_non_eigen_operator_reported():
    S = solve_jseries(2, 3)
    Q1 = DifferenceOperator.multiplication(2, {unit_q(2, 1): 1})
    res = verify_common_eigen(Q1 + DifferenceOperator.identity(2), S)
    assert not res.passed
    assert res.failure is not None
    T0 = DifferenceOperator.translation((1, 0, 0))
    res = verify_common_eigen(T0, S)
    assert not res.passed
    assert res.failure[0] == (0, 0)


def test_eigen_needs_budget():
    D = DifferenceOperator.multiplication(1, {(2,): 1})
    with pytest.raises(TruncationError):
        verify_common_eigen(D, solve_jseries(1, 1))


@pytest.mark.parametrize("r", [1, 2])
def test_normal_ordered_one_minus_Q_is_not_the_toda_operator(r):
    # coefficient 1 - Q_j to the left of T_j (rather than T_j after 1 - Q_j) loses the eigenproperty
    zero = (0,) * r
    terms = {(1,) + (0,) * r: {zero: 1}}
    for j in range(1, r + 1):
        shift = tuple(1 if k == j else 0 for k in range(r + 1))
        terms[shift] = {zero: 1, unit_q(r, j): -1}
    res = verify_common_eigen(DifferenceOperator(r, terms), solve_jseries(r, 3))
    assert not res.passed
    assert sum(res.failure[0]) == 1
