"""klooster command line.

Exit codes: 0 all checks pass, 1 some check failed, 2 usage or invalid
prime, 3 I/O failure.  Data goes to stdout (or --out), progress to stderr.
"""

from __future__ import annotations

import argparse
import csv
import sys
from contextlib import contextmanager
from pathlib import Path

from . import report
from .cache import TableCache
from .chebyshev import abs_power_coeffs, envelope_constants, even_power_coeffs, odd_power_coeffs
from .etaseries import eta_product_qexp
from .kloosterman import angles
from .modarith import PrimeModulus, primes_between
from .scan import CHECKS, ScanConfig, check_prime, moment_rows, run_scan, series_for
from .twisted import character, twisted_moment_ratios

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _log(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


def _prime(p: int) -> PrimeModulus:
    try:
        return PrimeModulus(p)
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from exc


@contextmanager
def _output(path: str | None):
    if path is None:
        yield sys.stdout
        return
    with open(path, "w", newline="") as fh:
        yield fh


def _table(args, p: PrimeModulus):
    cache = TableCache(args.cache)
    if args.no_cache:
        from .kloosterman import kloosterman_table

        return kloosterman_table(p)
    table, hit = cache.get(p)
    _log(f"cache hit: {cache.path_for(p)}" if hit else f"computed table p={p.p} -> {cache.path_for(p)}")
    return table


def _emit(rows, fmt: str, out) -> None:
    if fmt == "json":
        out.write(report.rows_to_json(rows) + "\n")
    else:
        report.write_csv(rows, out)


# --- commands ----------------------------------------------------------------


def cmd_table(args) -> int:
    p = _prime(args.p)
    cache = TableCache(args.cache)
    path = cache.path_for(p)
    existed = path.exists()
    table, hit = cache.get(p)
    if hit:
        _log(f"cache hit: {path} verified")
    else:
        _log(f"{'replaced inconsistent' if existed else 'wrote'} {path} ({p.p - 1} values, method {table.method})")
    return EXIT_OK


def cmd_verify(args) -> int:
    p = _prime(args.p)
    table = _table(args, p)
    rows = check_prime(p.p, args.kmax, tuple(args.checks), table)
    failed = [r for r in rows if not r.passed]
    for r in rows:
        _log(f"  {'ok  ' if r.passed else 'FAIL'} {r.identity or r.kind:<28} value={report.fmt_real(r.value)}")
    _log(f"p={p.p}: {len(rows) - len(failed)} passed, {len(failed)} failed")
    with _output(args.out) as out:
        _emit(rows, args.format, out)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_moments(args) -> int:
    p = _prime(args.p)
    table = _table(args, p)
    rows = moment_rows(table, args.kmax, series_for(p.p) if p.p > 7 else None)
    with _output(args.out) as out:
        _emit(rows, args.format, out)
    return EXIT_OK if all(r.passed for r in rows) else EXIT_FAIL


def cmd_scan(args) -> int:
    try:
        config = ScanConfig(
            pmin=args.pmin, pmax=args.pmax, kmax=args.kmax, checks=tuple(args.checks),
            out_path=Path(args.out) if args.out else None, format=args.format,
            cache_dir=Path(args.cache) if args.cache else None, jobs=args.jobs,
            use_cache=not args.no_cache,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    primes = [q for q in primes_between(config.pmin, config.pmax) if q >= 5]
    if not primes:
        _log(f"warning: no primes in [{config.pmin}, {config.pmax}]")
    n_pass = n_fail = 0
    collected = []
    header = True
    with _output(args.out) as out:
        for p, rows in run_scan(config, primes):
            bad = sum(not r.passed for r in rows)
            n_pass += len(rows) - bad
            n_fail += bad
            if config.format == "csv":
                report.write_csv(rows, out, header=header)
                header = False
                out.flush()
            else:
                collected.extend(rows)
            _log(f"p={p}: {len(rows)} rows, {bad} failed")
        if config.format == "csv" and header:
            report.write_csv([], out)
        if config.format == "json":
            _emit(collected, "json", out)
    _log(f"summary: {len(primes)} primes, {n_pass} rows passed, {n_fail} failed")
    return EXIT_FAIL if n_fail else EXIT_OK


def cmd_chebyshev(args) -> int:
    k = args.k
    if k < 0:
        raise UsageError("k must be >= 0")
    try:
        exp = abs_power_coeffs(k, args.L)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    env = envelope_constants(k, args.L)
    rows = [("a0", 0, exp.a0)]
    rows += [("a", ell, c) for ell, c in enumerate(exp.c, start=1)]
    rows.append(("tail_bound", exp.L, exp.tail_bound))
    rows += [("even_coeff", i, float(c)) for i, c in enumerate(even_power_coeffs(k).coeffs)]
    rows += [("odd_coeff", i, float(c)) for i, c in enumerate(odd_power_coeffs(k).coeffs)]
    rows += [("C_k", k, float(env.C_k)), ("D_k", k, env.D_k), ("E_k", k, env.E_k), ("F_k", k, env.F_k)]
    with _output(args.out) as out:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(("quantity", "index", "value"))
        for q, i, v in rows:
            w.writerow((q, i, report.fmt_real(v)))
    return EXIT_OK


def cmd_etaq(args) -> int:
    if args.N < 1:
        raise UsageError("N must be >= 1")
    series = eta_product_qexp(args.N)
    with _output(args.out) as out:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(("n", "coeff"))
        for n in range(1, series.N + 1):
            w.writerow((n, series[n]))
    return EXIT_OK


def cmd_twisted(args) -> int:
    p = _prime(args.p)
    if not 0 <= args.j <= p.p - 2:
        raise UsageError(f"j must lie in [0, {p.p - 2}]")
    if args.kmax < 1:
        raise UsageError("kmax must be >= 1")
    table = _table(args, p)
    rows = twisted_moment_ratios(character(p, args.j), angles(table), args.kmax)
    with _output(args.out) as out:
        report.write_twisted_csv(rows, out)
    return EXIT_OK


# --- parser ------------------------------------------------------------------


def _checks(text: str) -> list[str]:
    items = [c.strip() for c in text.split(",") if c.strip()]
    bad = [c for c in items if c not in CHECKS]
    if bad or not items:
        raise argparse.ArgumentTypeError(f"checks must be a comma list drawn from {','.join(CHECKS)}")
    return items


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="klooster", description="Kloosterman sums mod p: tables, moments and checks.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache", default=None, help="table cache directory (default $KLOOSTER_CACHE or ./.klooster-cache)")
    common.add_argument("--no-cache", action="store_true", help="compute tables in memory only")
    common.add_argument("--out", default=None, help="write data here instead of stdout")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("table", parents=[common], help="compute and cache S(a,1;p)")
    s.add_argument("--p", type=int, required=True)
    s.set_defaults(func=cmd_table)

    s = sub.add_parser("verify", parents=[common], help="run every check on one prime")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--kmax", type=int, default=6)
    s.add_argument("--checks", type=_checks, default=list(CHECKS))
    s.add_argument("--format", choices=("csv", "json"), default="json")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("moments", parents=[common], help="signed and absolute moments with envelopes")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--kmax", type=int, default=6)
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.set_defaults(func=cmd_moments)

    s = sub.add_parser("scan", parents=[common], help="run checks over a prime range")
    s.add_argument("--pmin", type=int, default=5)
    s.add_argument("--pmax", type=int, required=True)
    s.add_argument("--kmax", type=int, default=4)
    s.add_argument("--checks", type=_checks, default=list(CHECKS))
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_scan)

    s = sub.add_parser("chebyshev", parents=[common], help="expansion coefficients and envelope constants")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--L", type=int, default=None)
    s.set_defaults(func=cmd_chebyshev)

    s = sub.add_parser("etaq", parents=[common], help="eta-product q-expansion coefficients")
    s.add_argument("--N", type=int, required=True)
    s.set_defaults(func=cmd_etaq)

    s = sub.add_parser("twisted", parents=[common], help="normalized twisted moment ratios")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--j", type=int, required=True)
    s.add_argument("--kmax", type=int, default=5)
    s.set_defaults(func=cmd_twisted)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "kmax", 1) < 1:
        _log("error: kmax must be >= 1")
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        _log(f"error: {exc}")
        return EXIT_USAGE
    except OSError as exc:
        _log(f"I/O error: {exc}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
