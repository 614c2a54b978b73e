"""Command-line orchestration: every probe and scan, one deterministic
report per run.

Exit codes: 0 success; 1 at least one probe verdict is "fails" under
--strict; 2 usage error; 3 resource budget exceeded. Runs are free of
randomness, so identical arguments give byte-identical row payloads.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time

import numpy as np

from . import characters as characters_mod
from . import goldbach_twin as gt
from . import primes as primes_mod
from . import sieve_lab as sl
from . import zeros as zeros_mod
from .config import DEFAULT_CONFIG
from .errors import H8Error, ResourceError
from .reporting import ReportDocument, emit, fmt_point, fmt_value
from .special_functions import (
    AFORM_CLOSED_VS_ORACLE,
    FE_ZETA,
    LOGDERIV_ZETA,
    SYMMETRY_SERIES,
    IdentityReport,
    SymmetryProbeInput,
    identity_probe,
)

EXIT_OK = 0
EXIT_STRICT = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3

_CONVENTIONS = {
    "root_number_branch": "principal branch, sqrt(q) positive real",
    "sifting_boundary": "primes strictly below z (flip with --inclusive-z)",
    "bound_factors": "main terms only; 1 + O(1/log z) factors set to 1",
}


def _table_limit(args, needed: int) -> int:
    explicit = getattr(args, "table_limit", None)
    if explicit is None:
        env = os.environ.get("H8_TABLE_LIMIT")
        explicit = int(env) if env else 0
    if explicit and explicit > 10 ** 9:
        raise H8Error("table limit beyond 1e9 is out of scope")
    return max(needed, explicit, 10)


def _identity_battery(args) -> tuple[list[IdentityReport], dict]:
    cfg = DEFAULT_CONFIG
    reports: list[IdentityReport] = []

    re_grid = (-1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0)
    im_grid = np.linspace(-30.0, 30.0, 17)
    fe_points = [complex(r, i) for r in re_grid for i in im_grid]
    reports.append(identity_probe(FE_ZETA, fe_points, cfg, tolerance=args.fe_tol))

    ld_res = (-0.4, 0.1, 0.6, 1.1, 1.6)
    ld_ims = (2.3, 5.7, 9.1, 12.5, 17.3)
    ld_points = [complex(r, s * i) for r in ld_res for i in ld_ims for s in (1, -1)]
    reports.append(identity_probe(LOGDERIV_ZETA, ld_points, cfg, tolerance=args.logderiv_tol))

    aform_points = [complex(0.3, 5.0), complex(1.7, -3.0), complex(0.25, 12.0), complex(2.2, 0.8)]
    reports.append(identity_probe(AFORM_CLOSED_VS_ORACLE, aform_points, cfg))

    terms = min(cfg.series_terms, 10 ** 6)
    sym_inputs = [
        SymmetryProbeInput(alpha=0.25, gamma_ord=14.0, delta=0, terms=terms),
        SymmetryProbeInput(alpha=0.1, gamma_ord=21.0, delta=1, terms=terms),
    ]
    reports.append(identity_probe(SYMMETRY_SERIES, sym_inputs, cfg))

    table = primes_mod.build_prime_table(_table_limit(args, 10 ** 4))
    tp_points = [(10 ** 4, 3, 1), (10 ** 4, 4, 1), (10 ** 4, 5, 2)]
    reports.append(primes_mod.theta_psi_probe(tp_points, table, cfg))

    l_points = [complex(0.5, 2.0), complex(0.3, -1.5), complex(1.5, 3.0)]
    for q in range(3, args.q_max + 1):
        for chi in characters_mod.enumerate_characters(q):
            if chi.is_primitive and not chi.is_principal:
                reports.append(characters_mod.l_fe_probe(chi, l_points, cfg, tolerance=1e-6))
    for q, point in ((4, complex(0.3, 2.0)), (3, complex(0.5, 1.0))):
        chi = next(c for c in characters_mod.enumerate_characters(q) if not c.is_principal)
        reports.append(characters_mod.l_identity_probe(chi, [point], cfg))

    columns = ["identity", "point", "residual", "skipped", "signed_re", "signed_im"]
    rows = []
    for rep in reports:
        skip_map = dict(rep.skipped)
        for i, point in enumerate(rep.sample_points):
            signed = rep.signed_differences[i] if i < len(rep.signed_differences) else None
            pt = fmt_point(point if not isinstance(point, SymmetryProbeInput)
                           else (point.alpha, point.gamma_ord, point.delta, point.terms))
            if rep.subject:
                pt = f"{rep.subject}:{pt}"
            rows.append([
                rep.identity_id,
                pt,
                fmt_value(rep.residuals[i]),
                skip_map.get(i, ""),
                fmt_value(signed.real) if signed is not None else "",
                fmt_value(signed.imag) if signed is not None else "",
            ])
    # one line per identity: worst verdict over its reports, worst residual
    severity = {"holds": 0, "inconclusive": 1, "fails": 2}
    agg: dict[str, tuple[str, float]] = {}
    for rep in reports:
        verdict, max_res = agg.get(rep.identity_id, ("holds", float("-inf")))
        if severity[rep.verdict] > severity[verdict]:
            verdict = rep.verdict
        if not math.isnan(rep.max_residual):
            max_res = max(max_res, rep.max_residual)
        agg[rep.identity_id] = (verdict, max_res)
    summary = {
        key: f"{verdict} (max residual {fmt_value(max_res if max_res > float('-inf') else math.nan)})"
        for key, (verdict, max_res) in agg.items()
    }
    return reports, {"columns": columns, "rows": rows, "summary": summary}


def _cmd_identities(args) -> tuple[ReportDocument, list[str]]:
    reports, pack = _identity_battery(args)
    doc = ReportDocument(
        command="identities",
        config={
            "q_max": args.q_max,
            "fe_tol": fmt_value(args.fe_tol),
            "logderiv_tol": fmt_value(args.logderiv_tol),
            "conventions": _CONVENTIONS,
        },
        columns=pack["columns"],
        rows=pack["rows"],
        summary=pack["summary"],
    )
    return doc, [r.verdict for r in reports]


def _cmd_zeros(args) -> tuple[ReportDocument, list[str]]:
    zs = zeros_mod.find_zeta_zeros(args.max_height, DEFAULT_CONFIG, workers=args.workers)
    expected, actual, certified = zeros_mod.zero_count_check(zs)
    rows = [[fmt_value(g)] for g in zs.ordinates]
    doc = ReportDocument(
        command="zeros",
        config={"max_height": fmt_value(args.max_height), "grid_step": "0.05"},
        columns=["ordinate"],
        rows=rows,
        summary={
            "count": str(actual),
            "expected_count": fmt_value(expected),
            "certified": fmt_value(certified),
            "label": zs.label,
        },
    )
    return doc, []


def _cmd_ap_errors(args) -> tuple[ReportDocument, list[str]]:
    x = args.x
    table = primes_mod.build_prime_table(_table_limit(args, x))
    d_cap = args.d_cap if args.d_cap is not None else max(2, math.isqrt(x))
    b_range = None
    if args.b_cap is not None:
        b_range = list(range(1, min(args.b_cap, math.isqrt(x), 1000) + 1))
    summary_obj, rows = primes_mod.error_scan(
        x, d_cap, policy=args.policy, a_exponent=args.a_exp, b_exponent=args.b_exp,
        b_range=b_range, table=table,
    )
    columns = ["x", "q", "l", "b", "psi", "theta", "main_term", "e_psi", "e_theta"]
    row_data = [
        [r.x, r.q, r.l, r.b, r.psi_val, r.theta_val, r.main_term, r.e_psi, r.e_theta]
        for r in rows
    ]
    doc = ReportDocument(
        command="ap-errors",
        config={"x": str(x), "d_cap": str(d_cap), "policy": args.policy,
                "a_exponent": fmt_value(args.a_exp), "b_exponent": fmt_value(args.b_exp),
                "b_cap": str(args.b_cap) if args.b_cap else ""},
        columns=columns,
        rows=[[fmt_value(v) for v in row] for row in row_data],
        summary={
            "total_abs_e_psi": fmt_value(summary_obj.total),
            "comparison_x_logpow": fmt_value(summary_obj.comparison),
        },
    )
    return doc, []


def _cmd_sieve_bounds(args) -> tuple[ReportDocument, list[str]]:
    needed = max(args.n)
    table = primes_mod.build_prime_table(_table_limit(args, needed))
    columns = ["N", "y", "z", "u", "s_exact", "lower", "upper", "remainder",
               "f_u", "F_u", "within_bounds", "d_cap", "C_N"]
    rows = []
    for n in args.n:
        target = sl.goldbach_target(n) if args.target == "goldbach" else sl.twin_target(n)
        y = float(n)
        z = y ** (1.0 / args.u)
        d_cap = args.d_cap if args.d_cap is not None else min(1000, math.isqrt(n))
        rep = sl.bound_report(target, y, z, d_cap, table, inclusive_z=args.inclusive_z)
        rows.append([
            fmt_value(rep.n), fmt_value(rep.y), fmt_value(rep.z), fmt_value(rep.u),
            fmt_value(rep.s_exact), fmt_value(rep.lower_bound), fmt_value(rep.upper_bound),
            fmt_value(rep.remainder_sum), fmt_value(rep.f_u), fmt_value(rep.F_u),
            fmt_value(rep.within_bounds), fmt_value(rep.d_cap), fmt_value(rep.singular),
        ])
    doc = ReportDocument(
        command="sieve-bounds",
        config={"target": args.target, "u": fmt_value(args.u),
                "inclusive_z": fmt_value(args.inclusive_z), "conventions": _CONVENTIONS,
                "main_term_only": "true"},
        columns=columns,
        rows=rows,
        summary={"reports": str(len(rows))},
    )
    return doc, []


def _cmd_goldbach(args) -> tuple[ReportDocument, list[str]]:
    table = primes_mod.build_prime_table(_table_limit(args, args.n_end))
    records, summary = gt.scan_range(
        args.n_start, args.n_end, args.step, "goldbach", table, workers=args.workers
    )
    columns = ["N", "weighted_sum", "pairs_ordered", "pairs_unordered", "C_N",
               "bound", "ratio", "s_lower", "middle_term"]
    rows = [
        [fmt_value(r.n), fmt_value(r.weighted_sum), fmt_value(r.pair_count_ordered),
         fmt_value(r.pair_count_unordered), fmt_value(r.c_n), fmt_value(r.bound_value),
         fmt_value(r.ratio), fmt_value(r.s_lower), fmt_value(r.middle_term)]
        for r in records
    ]
    doc = ReportDocument(
        command="goldbach",
        config={"from": str(args.n_start), "to": str(args.n_end), "step": str(args.step)},
        columns=columns,
        rows=rows,
        summary={
            "violations": fmt_point(summary.violations) if summary.violations else "none",
            "violation_count": str(len(summary.violations)),
            "min_ratio_above_1e4": fmt_value(summary.min_ratio),
            "records": str(summary.n_records),
        },
    )
    return doc, []


def _cmd_twins(args) -> tuple[ReportDocument, list[str]]:
    table = primes_mod.build_prime_table(_table_limit(args, args.n_end))
    records, summary = gt.scan_range(
        args.n_start, args.n_end, args.step, "twin", table, workers=args.workers
    )
    columns = ["N", "weighted_sum", "pairs", "C_N", "bound", "ratio", "hl_ratio"]
    rows = [
        [fmt_value(r.n), fmt_value(r.weighted_sum), fmt_value(r.pair_count),
         fmt_value(r.c_n), fmt_value(r.bound_value), fmt_value(r.ratio),
         fmt_value(r.hl_ratio)]
        for r in records
    ]
    doc = ReportDocument(
        command="twins",
        config={"from": str(args.n_start), "to": str(args.n_end), "step": str(args.step)},
        columns=columns,
        rows=rows,
        summary={
            "violations": fmt_point(summary.violations) if summary.violations else "none",
            "min_ratio_above_1e4": fmt_value(summary.min_ratio),
            "records": str(summary.n_records),
        },
    )
    return doc, []


def _psi_for_label(label: str, x: int, table) -> float:
    if label == "zeta":
        psi, _, _ = primes_mod.chebyshev_snapshot(x, table)
        return psi
    q_str, _, idx_str = label.partition(".")
    try:
        q, idx = int(q_str), int(idx_str)
    except ValueError:
        raise H8Error(f"label must be 'zeta' or 'q.index', got {label!r}") from None
    chars = characters_mod.enumerate_characters(q)
    chi = next((c for c in chars if c.index == idx), None)
    if chi is None:
        raise H8Error(f"no character with label {label!r}")
    return primes_mod.psi_chi(x, chi, table).real


def _bound_from_file(path: str) -> float | None:
    """Height bound for a zero list: the header's T= entry if present,
    otherwise the largest ordinate in the file."""
    largest = None
    with open(path, encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if line.startswith("#"):
                for part in line[1:].replace(",", " ").split():
                    if part.startswith("T="):
                        try:
                            return float(part[2:])
                        except ValueError:
                            pass
                continue
            if line:
                try:
                    largest = float(line)
                except ValueError:
                    pass
    return largest


def _cmd_explicit_formula(args) -> tuple[ReportDocument, list[str]]:
    t_values = sorted(float(t) for t in args.t_values.split(","))
    x = int(args.x)
    table = primes_mod.build_prime_table(_table_limit(args, x))
    if args.zeros_file:
        bound = args.height_bound
        if bound is None:
            bound = _bound_from_file(args.zeros_file) or max(t_values)
        zs = zeros_mod.load_zeros_csv(args.zeros_file, args.label, bound)
    else:
        zs = zeros_mod.find_zeta_zeros(max(t_values), DEFAULT_CONFIG, workers=args.workers)
    exact_psi = _psi_for_label(args.label, x, table)
    columns = ["x", "truncation_T", "exact_psi", "formula_value", "residual",
               "bound_shape", "abs_majorant"]
    rows = []
    for t in t_values:
        row = zeros_mod.explicit_formula_check(x, t, zs, exact_psi)
        rows.append([fmt_value(row.x), fmt_value(row.truncation_T), fmt_value(row.exact_psi),
                     fmt_value(row.formula_value), fmt_value(row.residual),
                     fmt_value(row.bound_shape), fmt_value(row.abs_majorant)])
    doc = ReportDocument(
        command="explicit-formula",
        config={"x": str(x), "t_values": args.t_values, "label": args.label,
                "zeros_file": args.zeros_file or ""},
        columns=columns,
        rows=rows,
        summary={"zeros_available": str(len(zs)), "label": args.label},
    )
    return doc, []


def _cmd_report(args) -> tuple[ReportDocument, list[str]]:
    """A compact lab report: headline numbers from each module."""
    verdicts: list[str] = []
    rows: list[list[str]] = []
    cfg = DEFAULT_CONFIG

    fe = identity_probe(FE_ZETA, [complex(r, i) for r in (-0.5, 0.5, 1.5)
                                  for i in (-21.0, -7.0, 3.0, 11.0, 29.0)], cfg)
    verdicts.append(fe.verdict)
    rows.append(["identities", "fe_zeta_verdict", fe.verdict])
    rows.append(["identities", "fe_zeta_max_residual", fmt_value(fe.max_residual)])

    zs = zeros_mod.find_zeta_zeros(50.0, cfg, workers=args.workers)
    expected, actual, certified = zeros_mod.zero_count_check(zs)
    rows.append(["zeros", "count_to_50", str(actual)])
    rows.append(["zeros", "certified", fmt_value(certified)])

    table = primes_mod.build_prime_table(_table_limit(args, 10 ** 4))
    psi, theta, pi = primes_mod.chebyshev_snapshot(10 ** 4, table)
    rows.append(["primes", "psi_1e4", fmt_value(psi)])
    rows.append(["primes", "pi_1e4", str(pi)])

    g_records, g_summary = gt.scan_range(6, 10 ** 4, 2 * 10 ** 3, "goldbach", table,
                                         workers=args.workers)
    rows.append(["goldbach", "violations_to_1e4", str(len(g_summary.violations))])
    t_records, _ = gt.scan_range(10 ** 4, 10 ** 4, 1, "twin", table, workers=args.workers)
    rows.append(["twins", "pairs_to_1e4", str(t_records[0].pair_count)])
    rows.append(["twins", "hl_ratio_1e4", fmt_value(t_records[0].hl_ratio)])

    doc = ReportDocument(
        command="report",
        config={"conventions": _CONVENTIONS},
        columns=["section", "item", "value"],
        rows=rows,
        summary={"sections": "identities,zeros,primes,goldbach,twins"},
    )
    return doc, verdicts


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="h8",
        description="Numerical laboratory for zeta/L identities, zeros, prime "
                    "progressions, sieve bounds, and even-N/twin scans.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--table-limit", type=int, default=None,
                        help="prime table size (fallback: H8_TABLE_LIMIT env var)")
    common.add_argument("--out", type=str, default=None, help="output file path")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--strict", action="store_true",
                        help="exit 1 when any probe verdict is 'fails'")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_command(name: str, help_text: str):
        return sub.add_parser(name, help=help_text, parents=[common])

    p = add_command("identities", "run the identity probe battery")
    p.add_argument("--q-max", type=int, default=12)
    p.add_argument("--fe-tol", type=float, default=1e-8)
    p.add_argument("--logderiv-tol", type=float, default=1e-6)
    p.set_defaults(fn=_cmd_identities)

    p = add_command("zeros", "locate critical-line zeros up to a height")
    p.add_argument("--max-height", type=float, default=100.0)
    p.set_defaults(fn=_cmd_zeros)

    p = add_command("ap-errors", "progression error scan over moduli")
    p.add_argument("--x", type=int, default=10 ** 4)
    p.add_argument("--d-cap", type=int, default=None)
    p.add_argument("--policy", choices=("fixed_l", "max_over_l"), default="max_over_l")
    p.add_argument("--a-exp", type=float, default=2.0)
    p.add_argument("--b-exp", type=float, default=4.0)
    p.add_argument("--b-cap", type=int, default=None,
                   help="enable the scaled scan with b = 1..min(b_cap, sqrt(x), 1000)")
    p.set_defaults(fn=_cmd_ap_errors)

    p = add_command("sieve-bounds", "bound-vs-exact sieve reports")
    p.add_argument("--n", type=int, nargs="+", default=[10 ** 4])
    p.add_argument("--target", choices=("goldbach", "twin"), default="goldbach")
    p.add_argument("--u", type=float, default=3.0)
    p.add_argument("--d-cap", type=int, default=None)
    p.add_argument("--inclusive-z", action="store_true")
    p.set_defaults(fn=_cmd_sieve_bounds)

    p = add_command("goldbach", "even-N representation scan")
    p.add_argument("--from", dest="n_start", type=int, default=6)
    p.add_argument("--to", dest="n_end", type=int, default=10 ** 4)
    p.add_argument("--step", type=int, default=2)
    p.set_defaults(fn=_cmd_goldbach)

    p = add_command("twins", "twin-prime count scan")
    p.add_argument("--from", dest="n_start", type=int, default=100)
    p.add_argument("--to", dest="n_end", type=int, default=10 ** 5)
    p.add_argument("--step", type=int, default=100)
    p.set_defaults(fn=_cmd_twins)

    p = add_command("explicit-formula", "zero-sum truncation checks")
    p.add_argument("--x", type=float, default=1000)
    p.add_argument("--t-values", type=str, default="50,100,200")
    p.add_argument("--zeros-file", type=str, default=None)
    p.add_argument("--label", type=str, default="zeta")
    p.add_argument("--height-bound", type=float, default=None)
    p.set_defaults(fn=_cmd_explicit_formula)

    p = add_command("report", "compact cross-module lab report")
    p.set_defaults(fn=_cmd_report)

    return parser


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    started = time.perf_counter()
    try:
        doc, verdicts = args.fn(args)
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (H8Error, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    doc.wall_time_ms = (time.perf_counter() - started) * 1000.0

    if args.out:
        if doc.command == "zeros" and args.format == "csv":
            # the zero-list file format doubles as explicit-formula input
            zs = zeros_mod.ZeroSet(
                source="zeta_internal", label="zeta",
                ordinates=np.array([float(r[0]) for r in doc.rows]),
                height_bound=float(args.max_height),
            )
            zeros_mod.save_zeros_csv(zs, args.out)
        else:
            emit(doc, args.format, args.out)

    print(f"h8 {doc.command}: {len(doc.rows)} rows, hash {doc.determinism_hash[:16]}")
    for key, value in doc.summary.items():
        print(f"  {key}: {value}")
    if args.out:
        print(f"  wrote {args.out} ({args.format})")
    if args.strict and any(v == "fails" for v in verdicts):
        return EXIT_STRICT
    return EXIT_OK


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
