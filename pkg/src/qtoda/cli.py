"""``qtoda`` command-line front end.

Exit codes: 0 on success, 1 when a verification fails, 2 on usage errors or
when ``--max-terms`` is exceeded.  Output is deterministic.
"""

from __future__ import annotations

import argparse
import json
import sys
from itertools import product
from pathlib import Path

from qtoda.algebra import TermLimitExceeded, set_term_limit
from qtoda.series import TruncationError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


# argument helpers -----------------------------------------------------


def _int_vector(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {v}")
    return v


def _rank(text: str) -> int:
    v = _nonneg(text)
    if v < 1:
        raise argparse.ArgumentTypeError("rank must be >= 1")
    return v


def _common(p: argparse.ArgumentParser, formats=("json", "text")) -> None:
    p.add_argument("--format", choices=formats, default="json")
    p.add_argument("--max-terms", type=_nonneg, default=None, help="abort when a polynomial exceeds this many terms")


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False)


def _vector_arg(parser, args, name: str, length: int, default=None) -> tuple[int, ...]:
    value = getattr(args, name)
    if value is None:
        if default is None:
            parser.error(f"--{name} is required")
        return default
    if len(value) != length:
        parser.error(f"--{name} needs {length} entries, got {len(value)}")
    return value


def _table(rows: list[list[str]]) -> str:
    widths = [max(len(row[k]) for row in rows) for k in range(len(rows[0]))]
    return "\n".join("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows)


# commands -------------------------------------------------------------


def cmd_jseries(args, parser) -> int:
    from qtoda.flag import fixed_points
    from qtoda.series import solve_jseries

    S = solve_jseries(args.rank, args.truncation)
    if args.format == "json":
        _emit(_dump(S.to_dict()))
    else:
        rows = [["degree", "sigma", "J"]]
        for d in S.degrees():
            for sigma in fixed_points(args.rank):
                rows.append([str(list(d)), str(list(sigma)), str(S[d][sigma])])
        _emit(_table(rows))
    return EXIT_OK


def _verify_series(r: int, D: int, golden: str | None) -> list[dict]:
    from qtoda.conservation import commutant_search, verify_common_eigen
    from qtoda.flag import fixed_points
    from qtoda.hyperquot import verify_pole_gap
    from qtoda.series import TwistedSeries, check_eigen, closed_form_r1, closed_form_r2, degrees_up_to, solve_jseries

    checks = []

    def record(name, ok, detail):
        checks.append({"name": name, "passed": ok, "detail": detail})
        return ok

    S = solve_jseries(r, D)
    if golden is not None:
        try:
            G = TwistedSeries.from_json(Path(golden).read_text(encoding="utf-8"))
        except (OSError, ValueError, KeyError, TypeError) as exc:
            record("golden", False, f"cannot read golden file: {exc}")
            return checks
        if G.rank != r:
            record("golden", False, f"golden file has rank {G.rank}, expected {r}")
            return checks
        diff = S.first_difference(G, min(D, G.truncation))
        if diff is not None:
            d, sigma = diff
            record("golden", False, f"cell degree={list(d)} sigma={list(sigma)} differs from golden file")
            return checks
        record("golden", True, f"{len(degrees_up_to(r, min(D, G.truncation)))} degrees match")

    closed = {1: lambda d: closed_form_r1(d[0]), 2: closed_form_r2}.get(r)
    if closed is not None:
        bad = next(((d, s) for d in S.degrees() for s in fixed_points(r) if S[d][s] != closed(d)[s]), None)
        if bad:
            record("closed_form", False, f"solver differs from the product formula at degree={list(bad[0])} sigma={list(bad[1])}")
            return checks
        record("closed_form", True, "solver equals the product formula")

    rep = check_eigen(S)
    if not rep.passed:
        d, sigma = rep.failures[0]
        record("toda_eigen", False, f"H I != λ I at degree={list(d)} sigma={list(sigma)}")
        return checks
    record("toda_eigen", True, f"eigenvalue {rep.eigenvalue} up to |d| <= {rep.checked_truncation}")

    gaps = verify_pole_gap(S)
    if not gaps.passed:
        row = gaps.failures[0]
        record("pole_gap", False, f"gap {row.gap} < k_d {row.k_d} at degree={list(row.degree)} sigma={list(row.sigma)}")
        return checks
    record("pole_gap", True, f"minimum margin {min(x.margin for x in gaps.rows)}")

    if D >= 1:
        for k, op in enumerate(commutant_search(r)):
            res = verify_common_eigen(op, S)
            if not res.passed:
                where = f"degree={list(res.failure[0])} sigma={list(res.failure[1])}" if res.failure else ""
                record("commutant_eigen", False, f"basis element {k}: {res.reason} at {where}")
                return checks
        record("commutant_eigen", True, "every commutant basis element is diagonal on I")
    return checks


def cmd_verify(args, parser) -> int:
    if args.acceptance:
        from qtoda.acceptance import run_all

        checks = [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in run_all()]
    else:
        if args.rank is None or args.truncation is None:
            parser.error("verify needs --rank and --truncation (or --acceptance)")
        checks = _verify_series(args.rank, args.truncation, args.golden)
    passed = all(c["passed"] for c in checks)
    if args.format == "json":
        _emit(_dump({"rank": args.rank, "truncation": args.truncation, "passed": passed, "checks": checks}))
    else:
        _emit("\n".join(f"{'PASS' if c['passed'] else 'FAIL'} {c['name']}: {c['detail']}" for c in checks))
    if not passed:
        first = next(c for c in checks if not c["passed"])
        sys.stderr.write(f"verification failed: {first['name']}: {first['detail']}\n")
        return EXIT_FAIL
    return EXIT_OK


def cmd_euler(args, parser) -> int:
    from qtoda.localization import chi_projective, genfun_G, quasimap_weights, residue_G_r2

    r = args.rank
    method = args.method or ("projective" if r == 1 else "genfun")
    if method == "projective":
        d = _vector_arg(parser, args, "d", 1)
        z = _vector_arg(parser, args, "z", 1)
        value = chi_projective(quasimap_weights(r, d[0]), z[0])
    else:
        d = _vector_arg(parser, args, "d", r)
        z = _vector_arg(parser, args, "z", r)
        if method == "residue":
            if r != 2:
                parser.error("--method residue is only available for --rank 2")
            value = residue_G_r2(z, d)
        else:
            value = genfun_G(r, z, sum(d))[d]
    record = {"degree": list(d), "z": list(z), "method": method, "character": str(value)}
    if method == "residue":
        record["numerator_start"] = 0
    if args.format == "json":
        _emit(_dump(record))
    else:
        _emit(f"chi(d={list(d)}, z={list(z)}) [{method}] = {value}")
    return EXIT_OK


def cmd_census(args, parser) -> int:
    from qtoda.hyperquot import canonical_exponents, census_table, table_to_csv
    from qtoda.series import solve_jseries

    r = args.rank
    d = _vector_arg(parser, args, "d", r)
    if any(x < 0 for x in d):
        parser.error("--d must be componentwise >= 0")
    series = solve_jseries(r, sum(d))
    rows = census_table(r, d, series)
    cc = canonical_exponents(r, d)
    if args.format == "csv":
        _emit(table_to_csv(rows))
    elif args.format == "json":
        _emit(_dump({"rank": r, "degree": list(d), "k_d": cc.k_d, "p_exponents": list(cc.p_exponents), "count": len(rows), "rows": rows}))
    else:
        table = [["sigma", "delta_plus", "delta_minus", "k_d", "gap"]]
        for rec in rows:
            table.append([str(rec["sigma"]), str(rec["delta_plus"]), str(rec["delta_minus"]), str(rec["k_d"]), str(rec["gap"])])
        _emit(f"degree {list(d)}: {len(rows)} fixed points, k_d = {cc.k_d}, P-exponents {list(cc.p_exponents)}\n" + _table(table))
    return EXIT_OK


def cmd_qgroup(args, parser) -> int:
    from qtoda.qgroup import CartanData, serre_scalar_check, verify_qbinom_identity

    run_identity = args.check_identity or not args.serre
    run_serre = args.serre or not args.check_identity
    report: dict = {}
    if run_identity:
        report["qbinomial_identity"] = [{"m": m, "passed": verify_qbinom_identity(m)} for m in range(args.max_m + 1)]
    if run_serre:
        rows = []
        for r in range(1, args.max_rank + 1):
            for orient in product((1, -1), repeat=r - 1):
                cd = CartanData.type_A(r, orient)
                for j, i in cd.edges():
                    for sign in (1, -1):
                        rows.append({"rank": r, "orientation": list(orient), "j": j, "i": i, "sign": sign,
                                     "passed": serre_scalar_check(cd, i, j, sign)})
        report["serre"] = rows
    passed = all(row["passed"] for rows in report.values() for row in rows)
    report["passed"] = passed
    if args.format == "json":
        _emit(_dump(report))
    else:
        lines = []
        for row in report.get("qbinomial_identity", []):
            lines.append(f"{'PASS' if row['passed'] else 'FAIL'} q-binomial identity m={row['m']}")
        if "serre" in report:
            ok = sum(row["passed"] for row in report["serre"])
            lines.append(f"{'PASS' if ok == len(report['serre']) else 'FAIL'} Serre scalar check {ok}/{len(report['serre'])}")
        _emit("\n".join(lines))
    return EXIT_OK if passed else EXIT_FAIL


def cmd_conservation(args, parser) -> int:
    from qtoda.conservation import OperatorAnsatz, commutant_search, verify_common_eigen
    from qtoda.series import solve_jseries

    r = args.rank
    ansatz = OperatorAnsatz.default(r, args.g)
    basis = commutant_search(r, ansatz)
    S = solve_jseries(r, args.truncation) if args.truncation is not None else None
    entries = []
    passed = True
    for op in basis:
        entry = {"operator": op.to_json()}
        if S is not None:
            res = verify_common_eigen(op, S)
            entry["eigenvalue"] = str(res.eigenvalue) if res.eigenvalue is not None else None
            entry["passed"] = res.passed
            if res.failure:
                entry["failure"] = {"degree": list(res.failure[0]), "sigma": list(res.failure[1]), "reason": res.reason}
            passed = passed and res.passed
        entries.append(entry)
    if args.format == "json":
        _emit(_dump({"rank": r, "ansatz": {"shifts": [list(m) for m in ansatz.shifts], "g": ansatz.g},
                     "truncation": args.truncation, "dimension": len(basis), "basis": entries}))
    else:
        lines = [f"commutant dimension {len(basis)} (shifts in {{0,1}}^{r + 1}, Q-degree <= {ansatz.g})"]
        for k, (op, entry) in enumerate(zip(basis, entries)):
            lines.append(f"[{k}] {op}")
            if "eigenvalue" in entry:
                lines.append(f"    eigenvalue {entry['eigenvalue']} ({'PASS' if entry['passed'] else 'FAIL'})")
        _emit("\n".join(lines))
    return EXIT_OK if passed else EXIT_FAIL


# entry point ----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qtoda", description="Exact K-theoretic J-series and q-Toda checks for type-A flag manifolds.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("jseries", help="solve the recursion for the localized J-series")
    p.add_argument("--rank", type=_rank, required=True)
    p.add_argument("--truncation", type=_nonneg, required=True)
    _common(p)
    p.set_defaults(func=cmd_jseries)

    p = sub.add_parser("verify", help="run the consistency checks (exit 1 on failure)")
    p.add_argument("--rank", type=_rank)
    p.add_argument("--truncation", type=_nonneg)
    p.add_argument("--golden", metavar="PATH", help="compare the solved series with a saved jseries JSON file")
    p.add_argument("--acceptance", action="store_true", help="run the full end-to-end check suite")
    _common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("euler", help="Euler characteristic of a quasimap space")
    p.add_argument("--rank", type=_rank, required=True)
    p.add_argument("--d", type=_int_vector, required=True)
    p.add_argument("--z", type=_int_vector, required=True)
    p.add_argument("--method", choices=("projective", "genfun", "residue"))
    _common(p)
    p.set_defaults(func=cmd_euler)

    p = sub.add_parser("census", help="hyperquot fixed points, k_d and observed pole gaps")
    p.add_argument("--rank", type=_rank, required=True)
    p.add_argument("--d", type=_int_vector, required=True)
    _common(p, formats=("json", "text", "csv"))
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("qgroup", help="q-binomial identity and scalar Serre relations")
    p.add_argument("--check-identity", action="store_true")
    p.add_argument("--serre", action="store_true")
    p.add_argument("--max-m", type=_nonneg, default=8)
    p.add_argument("--max-rank", type=_rank, default=5)
    _common(p)
    p.set_defaults(func=cmd_qgroup)

    p = sub.add_parser("conservation", help="commutant of the Toda operator and eigenvalues on I")
    p.add_argument("--rank", type=_rank, required=True)
    p.add_argument("--truncation", type=_nonneg)
    p.add_argument("--g", type=_nonneg, default=1, help="Q-degree bound of the ansatz")
    _common(p)
    p.set_defaults(func=cmd_conservation)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    previous = set_term_limit(args.max_terms)
    try:
        return args.func(args, parser)
    except TermLimitExceeded as exc:
        sys.stderr.write(f"aborted: {exc}\n")
        return EXIT_USAGE
    except (ValueError, TruncationError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    finally:
        set_term_limit(previous)


if __name__ == "__main__":
    sys.exit(main())
