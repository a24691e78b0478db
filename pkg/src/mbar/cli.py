"""Command line front end.

Exit codes: 0 ok, 1 a check was violated, 2 usage or range error,
3 internal inconsistency (cross-method or cache mismatch, corrupt cache).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Optional, Sequence

from . import cache as cache_mod
from .analysis import (
    asymptotic_scan,
    cnki_constant_probe,
    is_real_rooted,
    is_unimodal,
    normalized_ranks,
    proof_bound_failures,
    ulc_check,
)
from .errors import CacheError, DomainError, InternalError, InvariantViolation, MbarError, TruncationCheckFailed
from .exact import binomial
from .formulas import DEFAULT_VERIFY_MARGIN, METHODS, StirlingConvention, class_polynomial, resolve_convention
from .lpoly import BettiTable, render, to_betti_table, validate_ranks
from .strata import N_MAX_ORACLE

log = logging.getLogger("mbar")

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3

TABLE_COLUMNS = ["n", "l", "rank", "binomial", "normalized_rank"]
ASYMPTOTIC_COLUMNS = ["n", "l", "rank", "ratio_minus_one", "scaled", "in_log_window"]
CHECK_COLUMNS = ["n", "check", "holds", "detail"]


class UsageError(MbarError):
    pass


def parse_range(text: str) -> List[int]:
    """``"5"``, ``"3:12"`` (inclusive), ``"10:100:10"`` or ``"50,100,200"``."""
    try:
        if "," in text:
            values = [int(x) for x in text.split(",") if x.strip()]
        elif ":" in text:
            parts = [int(x) for x in text.split(":")]
            if len(parts) == 2:
                parts.append(1)
            if len(parts) != 3 or parts[2] <= 0:
                raise ValueError
            values = list(range(parts[0], parts[1] + 1, parts[2]))
        else:
            values = [int(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return values


# --- output ------------------------------------------------------------------


def _config(args: argparse.Namespace) -> dict:
    skip = {"func", "jobs", "cache", "format"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _report(args, results, findings, convention: Optional[StirlingConvention]) -> dict:
    return {
        "command": args.command if not getattr(args, "check", None) else f"check {args.check}",
        "config": _config(args),
        "results": results,
        "resolved_convention": convention.as_dict() if convention else None,
        "findings": findings,
    }


def _csv(rows: List[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def _emit(args, report: dict, rows: List[dict], columns: Sequence[str], text: Callable[[], str]) -> None:
    fmt = args.format
    if fmt == "json":
        out = json.dumps(report, indent=2) + "\n"
    elif fmt == "csv":
        out = _csv(rows, columns)
    else:
        out = text()
        if out and not out.endswith("\n"):
            out += "\n"
    sys.stdout.write(out)


def _table_rows(table: BettiTable) -> List[dict]:
    d = table.n - 3
    norm = normalized_ranks(table)
    return [
        {"n": table.n, "l": l, "rank": str(r), "binomial": str(binomial(d, l)), "normalized_rank": str(norm[l])}
        for l, r in enumerate(table.ranks)
    ]


# --- shared machinery -----------------------------------------------------------


def _convention(args) -> StirlingConvention:
    conv = resolve_convention(6, verify_margin=args.verify_margin)
    log.debug("summation convention %s", conv.label())
    return conv


def _compute_table(n: int, method: str, conv: StirlingConvention, n_max_oracle: int) -> BettiTable:
    return to_betti_table(class_polynomial(n, method, conv, n_max_oracle), n)


def _scan_one(job) -> BettiTable:
    n, method, k_start, j_start, margin, n_max_oracle = job
    return _compute_table(n, method, StirlingConvention(k_start, j_start, margin), n_max_oracle)


def _tables(ns: Sequence[int], args, conv: StirlingConvention, method: Optional[str] = None) -> List[BettiTable]:
    method = method or args.method
    jobs = [(n, method, conv.k_start, conv.j_start, conv.verify_margin, args.n_max_oracle) for n in ns]
    if getattr(args, "jobs", 1) > 1 and len(jobs) > 1:
        log.debug("computing %d tables on %d workers", len(jobs), args.jobs)
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            return list(pool.map(_scan_one, jobs))
    return [_scan_one(j) for j in jobs]


def _reading(method: str) -> dict:
    if method != "cnki":
        return {}
    return {"coefficient_formula_reading": "corrected",
            "reading_note": "m=0 term counted only when l=k; counting it for every k adds the main terms of all k<l"}


def _cache_path(args) -> Optional[str]:
    return args.cache or os.environ.get("MBAR_CACHE") or None


def _n_list(args) -> List[int]:
    if getattr(args, "n", None):
        return args.n
    return list(range(args.n_min, args.n_max + 1))


# --- checks -------------------------------------------------------------------


def _check_table(kind: str, table: BettiTable) -> dict:
    if kind == "ulc":
        rep = ulc_check(table)
        return {
            "n": table.n,
            "check": kind,
            "holds": rep.all_hold,
            "detail": "; ".join(f"l={r.l}: {r.lhs} < {r.rhs}" for r in rep.violations),
            "report": rep.as_dict(),
        }
    if kind == "realroot":
        ok = is_real_rooted(table.polynomial())
        return {"n": table.n, "check": kind, "holds": ok, "detail": "" if ok else "non-real roots"}
    if kind == "unimodal":
        ok = is_unimodal(table.ranks)
        return {"n": table.n, "check": kind, "holds": ok, "detail": "" if ok else "not unimodal"}
    if kind == "symmetry":
        try:
            validate_ranks(table.n, table.ranks)
            return {"n": table.n, "check": kind, "holds": True, "detail": ""}
        except InvariantViolation as exc:
            return {"n": table.n, "check": kind, "holds": False, "detail": str(exc)}
    raise UsageError(f"unknown check {kind!r}")


def _injected_table(text: str) -> BettiTable:
    try:
        ranks = [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"bad --table {text!r}") from None
    return BettiTable.unchecked(len(ranks) + 2, ranks)


# --- commands -------------------------------------------------------------------


def cmd_class(args) -> int:
    if len(args.n) != 1:
        raise UsageError("class takes a single --n")
    n = args.n[0]
    conv = _convention(args)
    p = class_polynomial(n, args.method, conv, args.n_max_oracle)
    table = to_betti_table(p, n)
    findings = []
    path = _cache_path(args)
    if path:
        cache_mod.save(path, cache_mod.merge(cache_mod.load(path), {n: table}))
    result = {"n": n, "method": args.method, "class": render(p), "coeffs": [str(c) for c in p.coeffs],
              **_reading(args.method)}
    report = _report(args, [result], findings, conv)
    _emit(args, report, _table_rows(table), TABLE_COLUMNS, lambda: render(p))
    return EXIT_OK


def cmd_betti(args) -> int:
    conv = _convention(args)
    tables = _tables(_n_list(args), args, conv)
    rows = [row for t in tables for row in _table_rows(t)]
    results = [{"n": t.n, "method": args.method, "ranks": [str(r) for r in t.ranks], **_reading(args.method)}
               for t in tables]
    report = _report(args, results, [], conv)
    _emit(args, report, rows, TABLE_COLUMNS,
          lambda: "\n".join(f"{t.n}: " + " ".join(str(r) for r in t.ranks) for t in tables))
    return EXIT_OK


def cmd_check(args) -> int:
    conv = _convention(args)
    if args.table:
        tables = [_injected_table(args.table)]
    else:
        tables = _tables(_n_list(args), args, conv)
    results = [_check_table(args.check, t) for t in tables]
    findings = [
        {"n": r["n"], "check": r["check"], "violation": r["detail"], **({"report": r["report"]} if "report" in r else {})}
        for r in results
        if not r["holds"]
    ]
    report = _report(args, results, findings, conv)
    if findings and args.format == "text":
        args.format = "json"
    _emit(args, report, results, CHECK_COLUMNS,
          lambda: "\n".join(f"{r['n']}: {args.check} {'ok' if r['holds'] else 'VIOLATED'}" for r in results))
    return EXIT_VIOLATION if findings else EXIT_OK


def cmd_asymptotic(args) -> int:
    rep = asymptotic_scan(args.l, args.n, args.method, check_range=not args.no_range_check)
    rows = [e.as_dict() for e in rep.entries]
    findings = [] if rep.empirical_N is not None else [{"empirical_N": None, "note": "no tested n reaches 1/n^2"}]
    conv = _convention(args) if args.method == "stirling" else None
    report = _report(args, rep.as_dict(), findings, conv)

    def text():
        lines = [f"{'n':>6} {'|ratio-1|':>14} {'n^2|ratio-1|':>14}"]
        lines += [f"{r['n']:>6} {r['ratio_minus_one_float']:>14.6e} {r['scaled_float']:>14.6e}" for r in rows]
        lines.append(f"empirical_N: {rep.empirical_N}")
        return "\n".join(lines)

    _emit(args, report, rows, ASYMPTOTIC_COLUMNS, text)
    return EXIT_OK


def cmd_probe(args) -> int:
    k_max = args.k_max
    probe = cnki_constant_probe(args.n, lambda n: k_max, args.i_max,
                                {"n": [min(args.n), max(args.n)], "k_max": k_max, "i_max": args.i_max})
    failures = proof_bound_failures(range(1, args.i_max + 1), range(0, k_max + 1), args.n, args.t_max)
    results = {"probe": probe.as_dict(), "proof_bounds_hold": not failures}
    findings = [{"bound": f.kind, "params": f.params, "detail": f.detail} for f in failures]
    report = _report(args, results, findings, None)
    rows = [{"sup_value": str(probe.sup_value), "n": probe.argmax[0], "k": probe.argmax[1], "i": probe.argmax[2],
             "proof_bounds_hold": not failures}]
    _emit(args, report, rows, ["sup_value", "n", "k", "i", "proof_bounds_hold"],
          lambda: f"sup |C_nki|/n^(i+1) = {probe.sup_value} (~{float(probe.sup_value):.6g}) at "
                  f"n={probe.argmax[0]}, k={probe.argmax[1]}, i={probe.argmax[2]}\n"
                  f"proof bounds hold: {not failures}")
    return EXIT_VIOLATION if failures else EXIT_OK


def cmd_scan(args) -> int:
    path = _cache_path(args)
    existing = cache_mod.load(path) if path else {}
    conv = _convention(args)
    tables = _tables(_n_list(args), args, conv, method="stirling")
    results, findings = [], []
    for t in tables:
        checks = {kind: _check_table(kind, t) for kind in ("symmetry", "unimodal", "ulc", "realroot")}
        results.append({"n": t.n, "ranks": [str(r) for r in t.ranks],
                        "checks": {k: v["holds"] for k, v in checks.items()}})
        findings += [{"n": t.n, "check": k, "violation": v["detail"]} for k, v in checks.items() if not v["holds"]]
    if path:
        cache_mod.save(path, cache_mod.merge(existing, {t.n: t for t in tables}))
    report = _report(args, results, findings, conv)
    rows = [row for t in tables for row in _table_rows(t)]
    _emit(args, report, rows, TABLE_COLUMNS,
          lambda: "\n".join(f"{r['n']}: " + " ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in r["checks"].items())
                            for r in results))
    return EXIT_VIOLATION if findings else EXIT_OK


# --- parser ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--cache", help="class cache file (default: $MBAR_CACHE)")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--verify-margin", type=int, default=DEFAULT_VERIFY_MARGIN)
    common.add_argument("--n-max-oracle", type=int, default=N_MAX_ORACLE)

    def n_range(p, required=False):
        p.add_argument("--n", type=parse_range, required=required, help="n, a:b, a:b:step or a,b,c")
        p.add_argument("--n-min", type=int, default=3)
        p.add_argument("--n-max", type=int, default=12)

    parser = _Parser(prog="mbar", description="Grothendieck classes and Betti numbers of M̄_{0,n}.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("class", parents=[common], help="print the class polynomial")
    p.add_argument("--n", type=parse_range, required=True)
    p.add_argument("--method", choices=METHODS, default="stirling")
    p.set_defaults(func=cmd_class)

    p = sub.add_parser("betti", parents=[common], help="print Betti tables")
    n_range(p)
    p.add_argument("--method", choices=METHODS, default="stirling")
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("check", parents=[common], help="run one check over a range of n")
    p.add_argument("check", choices=("ulc", "realroot", "symmetry", "unimodal"))
    n_range(p)
    p.add_argument("--method", choices=METHODS, default="stirling")
    p.add_argument("--table", help="check this comma-separated table instead of computed ones")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("asymptotic", parents=[common], help="ratio to the main term along n")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--n", type=parse_range, required=True)
    p.add_argument("--method", choices=METHODS, default="cnki")
    p.add_argument("--no-range-check", action="store_true", help="allow n outside l <= n/(10 ln n)")
    p.set_defaults(func=cmd_asymptotic)

    p = sub.add_parser("probe-constants", parents=[common], help="empirical constant in |C_nki| <= C n^(i+1)")
    p.add_argument("--n", type=parse_range, default=list(range(4, 61)))
    p.add_argument("--k-max", type=int, default=20)
    p.add_argument("--i-max", type=int, default=10)
    p.add_argument("--t-max", type=int, default=20)
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("scan", parents=[common], help="tables plus all checks, appended to the cache")
    n_range(p)
    p.set_defaults(func=cmd_scan)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    del args.verbose
    if getattr(args, "jobs", 1) < 1:
        print("mbar: error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, DomainError, ValueError) as exc:
        print(f"mbar: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CacheError, InvariantViolation, TruncationCheckFailed, InternalError, MbarError) as exc:
        print(f"mbar: inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
