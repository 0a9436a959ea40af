import pytest

from qtoda.algebra import Field
from qtoda.operators import (
    DifferenceOperator,
    build_toda_operator,
    commutation_power,
    commutator,
    compose,
    total_translation,
    unit_q,
    unit_shift,
)


def test_toda_operator_r1():
    H = build_toda_operator(1)
    q = Field(1).q
    assert H.shifts() == [(0, 1), (1, 0)]
    assert H.terms[(1, 0)] == {(0,): Field(1).one}
    # T_{e1} acting after multiplication by (1 - Q1)
    assert H.terms[(0, 1)] == {(0,): Field(1).one, (1,): -(q**-1)}


def test_toda_operator_shape():
    for r in (1, 2, 3):
        H = build_toda_operator(r)
        assert len(H.shifts()) == r + 1
        assert sorted(H.shifts()) == sorted(unit_shift(r, j) for j in range(r + 1))
        assert H.q_degree() == 1
    with pytest.raises(ValueError):
        build_toda_operator(0)


def test_toda_operator_is_translation_after_multiplication():
    r = 2
    zero = (0,) * r
    expected = DifferenceOperator.translation(unit_shift(r, 0))
    for j in (1, 2):
        mult = DifferenceOperator.multiplication(r, {zero: 1, unit_q(r, j): -1})
        expected = expected + DifferenceOperator.translation(unit_shift(r, j)) @ mult
    assert build_toda_operator(r) == expected


def test_commutation_rule():
    q = Field(1).q
    T0 = DifferenceOperator.translation((1, 0))
    Q1 = DifferenceOperator.multiplication(1, {(1,): 1})
    assert compose(T0, Q1) == DifferenceOperator(1, {(1, 0): {(1,): q}})
    assert commutation_power((1, 0), (1,)) == 1
    assert commutation_power((0, 1), (1,)) == -1
    assert commutation_power((1, 1, 1), (2, 5)) == 0


def test_identity_is_neutral():
    H = build_toda_operator(2)
    I = DifferenceOperator.identity(2)
    assert compose(H, I) == H
    assert compose(I, H) == H


def test_square_support():
    H = build_toda_operator(2)
    shifts = set(compose(H, H).shifts())
    allowed = {tuple(a + b for a, b in zip(unit_shift(2, i), unit_shift(2, j))) for i in range(3) for j in range(3)}
    assert shifts <= allowed


def test_composition_is_associative():
    r = 2
    A = build_toda_operator(r)
    B = DifferenceOperator(r, {(0, 1, 1): {(1, 0): Field(r).lam(1), (0, 0): 2}})
    C = DifferenceOperator(r, {(1, 0, 0): {(0, 1): Field(r).q}, (0, 0, 0): {(1, 1): -1}})
    assert compose(compose(A, B), C) == compose(A, compose(B, C))


@pytest.mark.parametrize("r", [1, 2, 3])
def test_known_commuting_pairs(r):
    H = build_toda_operator(r)
    assert commutator(H, H).is_zero()
    assert commutator(H, total_translation(r)).is_zero()
    assert not commutator(H, DifferenceOperator.multiplication(r, {unit_q(r, 1): 1})).is_zero()


def test_json_round_trip():
    H = build_toda_operator(2)
    data = H.to_json()
    assert data[0]["shift"] == [0, 0, 1]
    assert data[0]["coeff"] == {"1": "1", "Q2": "-q^-1"}
    assert DifferenceOperator.from_json(2, data) == H


def test_rank_checks():
    with pytest.raises(ValueError):
        DifferenceOperator(1, {(1, 0, 0): {(0,): 1}})
    with pytest.raises(ValueError):
        compose(build_toda_operator(1), build_toda_operator(2))
