from itertools import product
from math import comb

import pytest

from qtoda.algebra import Field
from qtoda.qgroup import (
    CartanData,
    q_binomial,
    q_binomial_pascal,
    qbinom_sides,
    serre_exponent,
    serre_root_criterion,
    serre_scalar_check,
    serre_scalar_value,
    verify_qbinom_identity,
)

F = Field(0)
q = F.q


def test_q_binomial_examples():
    assert q_binomial(5, 0) == F.one
    assert q_binomial(2, 1) == 1 + q
    assert q_binomial(4, 2) == 1 + q + 2 * q**2 + q**3 + q**4
    with pytest.raises(ValueError):
        q_binomial(2, 3)
    with pytest.raises(ValueError):
        q_binomial(2, -1)


@pytest.mark.parametrize("m", range(11))
def test_q_binomial_properties(m):
    for k in range(m + 1):
        b = q_binomial(m, k)
        assert b.is_polynomial()
        assert b == q_binomial(m, m - k)
        assert b == q_binomial_pascal(m, k, 1)
        assert b == q_binomial_pascal(m, k, 2)
        assert b.evaluate(q=1) == comb(m, k)


def test_identity_small_cases():
    lhs, rhs = qbinom_sides(0)
    assert lhs == rhs == [F.one]
    lhs, rhs = qbinom_sides(2)
    assert lhs == [F.one, -(1 + q), q]
    assert rhs == lhs


@pytest.mark.parametrize("m", range(9))
def test_identity(m):
    assert verify_qbinom_identity(m)


def test_type_A_data():
    cd = CartanData.type_A(3, (1, -1))
    assert cd.cartan == ((2, -1, 0), (-1, 2, -1), (0, -1, 2))
    assert cd.offsets[1][0] == 1 and cd.offsets[0][1] == -1
    assert cd.offsets[2][1] == -1 and cd.offsets[1][2] == 1
    assert sorted(cd.edges()) == [(0, 1), (1, 0), (1, 2), (2, 1)]
    with pytest.raises(ValueError):
        CartanData.type_A(3, (1,))


def test_serre_examples():
    cd = CartanData.type_A(2, (1,))
    assert serre_exponent(cd, 0, 1, 1) == 0
    assert serre_exponent(cd, 0, 1, -1) == -2
    assert serre_scalar_check(cd, 0, 1, 1)
    assert serre_scalar_check(cd, 0, 1, -1)
    far = CartanData.type_A(3)
    assert serre_scalar_check(far, 0, 2, 1)
    with pytest.raises(ValueError):
        serre_scalar_check(cd, 0, 0, 1)


@pytest.mark.parametrize("r", range(1, 6))
def test_serre_all_type_A_edges(r):
    for orient in product((1, -1), repeat=r - 1):
        cd = CartanData.type_A(r, orient)
        for j in range(r):
            for i in range(r):
                if i == j:
                    continue
                for sign in (1, -1):
                    assert serre_scalar_check(cd, i, j, sign)
                    assert serre_root_criterion(cd, i, j, sign)


def test_serre_detects_bad_offsets():
    # an offset of 2 moves x off the roots of the product
    cd = CartanData(2, ((2, -1), (-1, 2)), (1, 1), ((0, -2), (2, 0)))
    assert not serre_scalar_check(cd, 0, 1, 1)
    assert not serre_root_criterion(cd, 0, 1, 1)
    assert not serre_scalar_value(cd, 0, 1, 1).is_zero()


def test_serre_with_symmetrizer():
    # B2-like node with (α, α)/2 = 2: half-integer exponents handled exactly
    cd = CartanData(2, ((2, -2), (-1, 2)), (1, 2), ((0, -1), (1, 0)))
    for i, j in [(0, 1), (1, 0)]:
        for sign in (1, -1):
            assert serre_scalar_check(cd, i, j, sign) == serre_root_criterion(cd, i, j, sign)


def test_cartan_validation():
    with pytest.raises(ValueError):
        CartanData(2, ((2, -1), (-1, 2)), (1, 1), ((0, 1), (1, 0)))
