"""End-to-end checks of the engine at desk-scale truncations.

Each check returns a :class:`CheckResult`; ``run_all`` runs them in a fixed
order.  They are shared by ``qtoda verify --acceptance`` and the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable

from qtoda.conservation import commutant_search, standard_laws, verify_common_eigen
from qtoda.flag import LocalizedClass, chi_flag, fixed_points, weyl_character
from qtoda.hyperquot import enumerate_by_filter, enumerate_hq_fixed_points, verify_pole_gap
from qtoda.localization import chi_projective, genfun_G, quasimap_weights, residue_G_r2, symmetric_h_oracle
from qtoda.qgroup import CartanData, serre_scalar_check, verify_qbinom_identity
from qtoda.series import check_eigen, closed_form_r1, closed_form_r2, degrees_up_to, solve_jseries


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def _cell(d, sigma) -> str:
    return f"d={list(d)} sigma={list(sigma)}"


def closed_form_r1_check() -> CheckResult:
    S = solve_jseries(1, 6)
    for d in range(7):
        expected = closed_form_r1(d)
        for sigma in fixed_points(1):
            if S[(d,)][sigma] != expected[sigma]:
                return CheckResult("closed_form_r1", False, f"mismatch at {_cell((d,), sigma)}")
    return CheckResult("closed_form_r1", True, "d <= 6, both fixed points")


def closed_form_r2_check() -> CheckResult:
    S = solve_jseries(2, 5)
    for d in degrees_up_to(2, 5):
        expected = closed_form_r2(d)
        for sigma in fixed_points(2):
            if S[d][sigma] != expected[sigma]:
                return CheckResult("closed_form_r2", False, f"mismatch at {_cell(d, sigma)}")
    # the other numerator convention already fails at d = 0
    alt = closed_form_r2((0, 0), numerator_start=0)
    alt_ok = all(alt[s] == S[(0, 0)][s] for s in fixed_points(2))
    return CheckResult("closed_form_r2", True, f"|d| <= 5, 6 fixed points, numerator from m=1 (m=0 matches: {alt_ok})")


def toda_eigen_check() -> CheckResult:
    for r, D in ((1, 5), (2, 4), (3, 3)):
        rep = check_eigen(solve_jseries(r, D))
        if not rep.passed:
            d, sigma = rep.failures[0]
            return CheckResult("toda_eigen", False, f"r={r}: H I != λ I at {_cell(d, sigma)}")
    return CheckResult("toda_eigen", True, "r=1,2,3 at truncations 5,4,3, eigenvalue sum of Λ_j^-1")


def factorization_r1_check() -> CheckResult:
    S = solve_jseries(1, 4)
    for z in range(3):
        G = genfun_G(1, (z,), 4, S)
        for d in range(5):
            if G[(d,)] != chi_projective(quasimap_weights(1, d), z):
                return CheckResult("factorization_r1", False, f"z={z}, d={d}")
    return CheckResult("factorization_r1", True, "d <= 4, z in 0..2")


def residue_r2_check() -> CheckResult:
    S = solve_jseries(2, 2)
    for z in ((0, 0), (1, 0), (1, 1)):
        G = genfun_G(2, z, 2, S)
        for d in degrees_up_to(2, 2):
            res = residue_G_r2(z, d)
            if res != G[d]:
                return CheckResult("residue_r2", False, f"z={list(z)}, d={list(d)}: residue != generating function")
            if not res.is_laurent():
                return CheckResult("residue_r2", False, f"z={list(z)}, d={list(d)}: not a Laurent polynomial")
    return CheckResult("residue_r2", True, "|d| <= 2, z in (0,0),(1,0),(1,1), numerator from m=0")


def pole_gap_check() -> CheckResult:
    for r in (1, 2, 3):
        rep = verify_pole_gap(solve_jseries(r, 4))
        if not rep.passed:
            row = rep.failures[0]
            return CheckResult("pole_gap", False, f"r={r}: gap {row.gap} < k_d {row.k_d} at {_cell(row.degree, row.sigma)}")
    sharp = verify_pole_gap(solve_jseries(1, 6))
    if not sharp.sharp():
        row = next(x for x in sharp.rows if x.margin != 0)
        return CheckResult("pole_gap", False, f"r=1 bound not attained at {_cell(row.degree, row.sigma)}")
    return CheckResult("pole_gap", True, "r <= 3, |d| <= 4; equality for r=1, d <= 6")


def hq_census_check() -> CheckResult:
    for d in range(9):
        n = len(enumerate_hq_fixed_points(1, (d,)))
        if n != 2 * (d + 1):
            return CheckResult("hq_census", False, f"r=1, d={d}: {n} points")
    for d in degrees_up_to(2, 3):
        direct = enumerate_hq_fixed_points(2, d)
        oracle = enumerate_by_filter(2, d)
        if len(set(direct)) != len(direct) or set(direct) != set(oracle):
            return CheckResult("hq_census", False, f"r=2, d={list(d)}: enumerator and filter disagree")
    return CheckResult("hq_census", True, "r=1 counts 2(d+1) for d <= 8; r=2 filter oracle for |d| <= 3")


def oracle_check() -> CheckResult:
    for r in (1, 2, 3):
        for z in product(range(3), repeat=r):
            if chi_flag(LocalizedClass.p_monomial(r, z)) != weyl_character(r, z):
                return CheckResult("oracles", False, f"chi_flag != weyl_character at r={r}, z={list(z)}")
    for r in (1, 2):
        for d in range(4):
            W = quasimap_weights(r, d)
            for z in range(4):
                if chi_projective(W, z) != symmetric_h_oracle(W, z):
                    return CheckResult("oracles", False, f"chi_projective != h_z at r={r}, d={d}, z={z}")
    return CheckResult("oracles", True, "Weyl character r <= 3, z_i <= 2; h_z oracle r <= 2, d <= 3, z <= 3")


def qgroup_check() -> CheckResult:
    for m in range(9):
        if not verify_qbinom_identity(m):
            return CheckResult("qgroup", False, f"q-binomial identity fails at m={m}")
    for r in range(1, 6):
        for orient in product((1, -1), repeat=r - 1):
            cd = CartanData.type_A(r, orient)
            for j, i in cd.edges():
                for sign in (1, -1):
                    if not serre_scalar_check(cd, i, j, sign):
                        return CheckResult("qgroup", False, f"Serre check fails: A_{r}, orientation {list(orient)}, edge ({j},{i}), sign {sign}")
    return CheckResult("qgroup", True, "identity m <= 8; Serre on all A_r edges, r <= 5, all orientations and signs")


def conservation_check() -> CheckResult:
    basis = commutant_search(2)
    for law, name in zip(standard_laws(2), ("identity", "toda operator", "total translation")):
        if not any(b == law for b in basis):
            return CheckResult("conservation", False, f"basis lacks the {name}")
    S = solve_jseries(2, 4)
    for k, D in enumerate(basis):
        res = verify_common_eigen(D, S)
        if not res.passed:
            where = _cell(*res.failure) if res.failure else "?"
            return CheckResult("conservation", False, f"basis element {k}: {res.reason} at {where}")
    # one scalar λ serves every Q-degree, so the eigenvalue is Q-independent
    return CheckResult("conservation", True, f"r=2 commutant dimension {len(basis)}, all elements eigen on I to truncation 4")


CHECKS: list[Callable[[], CheckResult]] = [
    closed_form_r1_check,
    closed_form_r2_check,
    toda_eigen_check,
    factorization_r1_check,
    residue_r2_check,
    pole_gap_check,
    hq_census_check,
    oracle_check,
    qgroup_check,
    conservation_check,
]


def run_all() -> list[CheckResult]:
    return [check() for check in CHECKS]
