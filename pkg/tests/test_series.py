import json
from pathlib import Path

import pytest

from qtoda.algebra import Field
from qtoda.flag import LocalizedClass, fixed_points
from qtoda.operators import DifferenceOperator, build_toda_operator, total_translation
from qtoda.series import (
    TruncationError,
    TwistedSeries,
    apply_operator,
    check_eigen,
    closed_form_r1,
    closed_form_r2,
    degrees_up_to,
    linear_term,
    recursion_divisor,
    shift_action,
    solve_jseries,
    toda_eigenvalue,
)

GOLDEN = Path(__file__).parent / "golden"


def test_degrees_up_to():
    assert degrees_up_to(2, 1) == [(0, 0), (0, 1), (1, 0)]
    assert len(degrees_up_to(3, 2)) == 10
    assert degrees_up_to(1, -1) == []


def test_shift_action_examples():
    F = Field(1)
    q = F.q
    assert shift_action(0, (1,), (0, 1)) == F.lam(0, -1) * q
    assert shift_action(1, (1,), (0, 1)) == F.lam(0) * q**-1
    with pytest.raises(IndexError):
        shift_action(2, (1,), (0, 1))


@pytest.mark.parametrize("r", [1, 2, 3])
def test_shift_actions_telescope_at_degree_zero(r):
    zero = (0,) * r
    for sigma in fixed_points(r):
        prod = Field(r).one
        for j in range(r + 1):
            prod = prod * shift_action(j, zero, sigma)
        assert prod == Field(r).one


def test_solver_small_values():
    F1, F2 = Field(1), Field(2)
    q1, q2 = F1.q, F2.q
    S1 = solve_jseries(1, 1)
    assert all(S1[(0,)][s] == F1.one for s in fixed_points(1))
    assert S1[(1,)][(0, 1)] == 1 / ((1 - q1) * (1 - F1.lam(0, -2) * q1))
    S2 = solve_jseries(2, 1)
    assert S2[(1, 0)][(0, 1, 2)] == 1 / ((1 - q2) * (1 - F2.lam(0, -1) * F2.lam(1) * q2))


def test_closed_form_r1_examples():
    F = Field(1)
    q = F.q
    a = F.lam(0, -2)
    assert closed_form_r1(0) == LocalizedClass.constant(1)
    assert closed_form_r1(1)[(0, 1)] == 1 / ((1 - q) * (1 - a * q))
    assert closed_form_r1(2)[(0, 1)] == 1 / ((1 - q) * (1 - q**2) * (1 - a * q) * (1 - a * q**2))


def test_closed_form_r1_matches_solver():
    S = solve_jseries(1, 6)
    for d in range(7):
        assert S[(d,)] == closed_form_r1(d), d


def test_closed_form_r2_matches_solver():
    S = solve_jseries(2, 5)
    for d in degrees_up_to(2, 5):
        assert S[d] == closed_form_r2(d), d


def test_closed_form_r2_numerator_convention():
    # starting the numerator at m=0 breaks J_0 = 1
    S = solve_jseries(2, 1)
    assert closed_form_r2((0, 0), numerator_start=1) == LocalizedClass.constant(2)
    assert closed_form_r2((0, 0), numerator_start=0) != S[(0, 0)]
    assert closed_form_r2((1, 1), numerator_start=0) != closed_form_r2((1, 1))


@pytest.mark.parametrize("r", [1, 2, 3])
def test_linear_terms(r):
    S = solve_jseries(r, 1)
    for i in range(1, r + 1):
        d = tuple(1 if k == i - 1 else 0 for k in range(r))
        for sigma in fixed_points(r):
            assert S[d][sigma] == linear_term(sigma, i), (d, sigma)


@pytest.mark.parametrize("r,D", [(1, 6), (2, 6), (3, 4)])
def test_recursion_divisor_nonzero(r, D):
    q = Field(r).q
    for d in degrees_up_to(r, D)[1:]:
        for sigma in fixed_points(r):
            assert not recursion_divisor(sigma, d, q).is_zero()


@pytest.mark.parametrize("r", [1, 2])
def test_q_inversion_commutes_with_solver(r):
    F = Field(r)
    flipped = solve_jseries(r, 3, q=F.q**-1)
    direct = solve_jseries(r, 3).map(lambda v: v.substitute_q(F.q**-1))
    assert flipped == direct


def test_apply_identity_and_translation():
    S = solve_jseries(2, 3)
    assert apply_operator(DifferenceOperator.identity(2), S) == S
    assert apply_operator(total_translation(2), S) == S


def test_apply_toda_r1():
    S = solve_jseries(1, 3)
    HS = apply_operator(build_toda_operator(1), S)
    assert HS.truncation == 2
    F = Field(1)
    lam = F.lam(0) + F.lam(0, -1)
    assert HS == S.truncate(2).scale(lam)


def test_apply_rank_mismatch():
    with pytest.raises(ValueError):
        apply_operator(build_toda_operator(2), solve_jseries(1, 2))


def test_apply_exhausts_truncation():
    with pytest.raises(TruncationError):
        apply_operator(build_toda_operator(1), solve_jseries(1, 0))


@pytest.mark.parametrize("r,D", [(1, 4), (2, 4), (3, 3)])
def test_check_eigen(r, D):
    rep = check_eigen(solve_jseries(r, D))
    assert rep.passed
    assert rep.checked_truncation == D - 1
    assert rep.eigenvalue == toda_eigenvalue(r)


def test_check_eigen_reports_failures():
    S = solve_jseries(1, 3)
    bad = dict(S.coeffs)
    bad[(2,)] = S[(2,)] * LocalizedClass.constant(1, 2)
    rep = check_eigen(TwistedSeries(1, 3, bad))
    assert not rep.passed
    assert rep.failures[0][0] in {(1,), (2,)}


def test_missing_degree_rejected():
    S = solve_jseries(1, 2)
    coeffs = dict(S.coeffs)
    del coeffs[(2,)]
    with pytest.raises(ValueError):
        TwistedSeries(1, 2, coeffs)


def test_json_round_trip():
    S = solve_jseries(2, 2)
    back = TwistedSeries.from_json(S.to_json())
    assert back == S
    assert back.to_json() == S.to_json()
    cell = S.to_dict()["coefficients"][0]
    assert set(cell) == {"degree", "sigma", "num", "den"}


@pytest.mark.parametrize("name,r,D", [("jseries_r1_D3.json", 1, 3), ("jseries_r2_D2.json", 2, 2)])
def test_golden(name, r, D):
    golden = TwistedSeries.from_json((GOLDEN / name).read_text(encoding="utf-8"))
    assert golden == solve_jseries(r, D)
    # textual form is canonical, so serialization is stable too
    assert json.loads((GOLDEN / name).read_text(encoding="utf-8")) == solve_jseries(r, D).to_dict()
