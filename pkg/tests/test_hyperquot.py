import csv
import io
import json
from itertools import product

import pytest

from qtoda.hyperquot import (
    HQFixedPoint,
    canonical_exponents,
    census_table,
    enumerate_by_filter,
    enumerate_hq_fixed_points,
    is_admissible,
    k_d,
    matrix_pairs,
    table_to_csv,
    table_to_json,
    verify_pole_gap,
)
from qtoda.series import degrees_up_to, padded, solve_jseries


def test_census_r1_examples():
    pts = enumerate_hq_fixed_points(1, (0,))
    assert len(pts) == 2
    assert all(p.delta_plus == ((0,),) and p.delta_minus == ((0,),) for p in pts)
    assert len(enumerate_hq_fixed_points(1, (2,))) == 6


@pytest.mark.parametrize("d", range(9))
def test_census_r1_counts(d):
    assert len(enumerate_hq_fixed_points(1, (d,))) == 2 * (d + 1)


@pytest.mark.parametrize("d", degrees_up_to(2, 3))
def test_enumerator_matches_filter_oracle(d):
    direct = enumerate_hq_fixed_points(2, d)
    oracle = enumerate_by_filter(2, d)
    assert len(set(direct)) == len(direct)
    assert set(direct) == set(oracle)


def test_enumerator_matches_filter_r3():
    for d in degrees_up_to(3, 1):
        assert set(enumerate_hq_fixed_points(3, d)) == set(enumerate_by_filter(3, d))


def test_r2_degree_10():
    # column 1 must vanish, m22 splits 1 between the two matrices
    pairs = matrix_pairs(2, (1, 0))
    assert len(pairs) == 2
    assert len(enumerate_hq_fixed_points(2, (1, 0))) == 12


def test_admissibility_rules():
    assert is_admissible(2, (1, 0), ((0,), (0, 1)), ((0,), (0, 0)))
    # row monotonicity broken
    assert not is_admissible(2, (0, 1), ((0,), (1, 0)), ((0,), (0, 0)))
    # wrong column sum
    assert not is_admissible(2, (1, 0), ((0,), (0, 0)), ((0,), (0, 0)))
    with pytest.raises(ValueError):
        enumerate_hq_fixed_points(2, (1, -1))


def test_enumeration_is_deterministic():
    a = enumerate_hq_fixed_points(2, (2, 1))
    assert a == enumerate_hq_fixed_points(2, (2, 1))
    assert [p.sigma for p in a] == sorted(p.sigma for p in a)


def test_k_d_examples():
    assert k_d(1, (1,)) == 2
    assert k_d(1, (2,)) == 6
    assert k_d(2, (1, 1)) == 3
    assert k_d(3, (0, 0, 0)) == 0


def test_canonical_exponents_examples():
    cc = canonical_exponents(1, (1,))
    assert (cc.p_exponents, cc.k_d) == ((4,), 2)
    assert canonical_exponents(2, (0, 0)).p_exponents == (2, 2)
    cc = canonical_exponents(2, (1, 1))
    assert (cc.p_exponents, cc.k_d) == ((3, 3), 3)


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_k_d_identity(r):
    for d in product(range(4), repeat=r):
        pad = padded(d)
        sq = sum((pad[i] - pad[i - 1]) ** 2 for i in range(1, r + 2))
        assert sq % 2 == 0
        cc = canonical_exponents(r, d)
        assert sum(di * e for di, e in zip(d, cc.p_exponents)) == 2 * cc.k_d
        assert cc.k_d >= 0


@pytest.mark.parametrize("r,D", [(1, 6), (2, 4), (3, 4)])
def test_pole_gap(r, D):
    rep = verify_pole_gap(solve_jseries(r, D))
    assert rep.passed
    assert len(rep.rows) == len(degrees_up_to(r, D)) * len(set(row.sigma for row in rep.rows))


def test_pole_gap_sharp_r1():
    rep = verify_pole_gap(solve_jseries(1, 6))
    assert rep.sharp()
    gaps = {row.degree: row.gap for row in rep.rows}
    assert gaps[(1,)] == 2 and gaps[(2,)] == 6


def test_census_table_exports():
    rows = census_table(1, (2,), solve_jseries(1, 2))
    assert len(rows) == 6
    assert all(r["k_d"] == 6 and r["gap"] == 6 for r in rows)
    assert json.loads(table_to_json(rows)) == rows
    parsed = list(csv.DictReader(io.StringIO(table_to_csv(rows))))
    assert len(parsed) == 6
    assert json.loads(parsed[0]["delta_plus"]) == rows[0]["delta_plus"]
    assert census_table(1, (1,))[0]["gap"] is None


def test_fixed_point_record():
    p = HQFixedPoint((1, 0), ((2,),), ((0,),))
    assert p.as_dict() == {"sigma": [1, 0], "delta_plus": [[2]], "delta_minus": [[0]]}
