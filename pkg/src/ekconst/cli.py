"""Command-line entry point.

Subcommands: gamma (one constant), decompose (seven-term identity
self-check), scan (dyadic block with summary statistics), probe
(progression-error totals), cache (list / clear / verify the conductor
cache). Exit codes: 0 success, 1 self-check failure, 2 usage, 3 I/O.

Every command prints a '#' header naming its effective parameters, so any
reported number can be reproduced from the output alone.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import asdict

from .decomp import decompose
from .ekgamma import CacheCorruption, ConductorCache, gamma_q
from .experiments import (dyadic_mean, eh_probe, emit, render,
                          residue_sum_check, scan_range, theorem_statistic)
from .sieve import MAX_TABLE_BOUND, build_tables
from .stieltjes import DEFAULT_EM_TERMS

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3

DEFAULT_SIEVE_BOUND = 1_000_000
RESIDUAL_TOLERANCE = 1e-6
DEFAULT_EPSILON = 0.5
DEFAULT_SPLIT_EXPONENT = 2.0

#: probe self-check: moduli checked and absolute tolerance at x = 1e5,
#: scaled linearly with x to track accumulation error growth.
SELF_CHECK_MODULI = 50
SELF_CHECK_TOL = 1e-8
SELF_CHECK_BASE_X = 1e5


def _g(value) -> str:
    return format(value, ".12g")


def _err(message: str) -> None:
    print(f"ekconst: error: {message}", file=sys.stderr)


def _open_cache(cache_dir) -> ConductorCache:
    return ConductorCache(ConductorCache.default_path(cache_dir))


def cmd_gamma(args) -> int:
    if args.q < 1:
        _err(f"q must be >= 1, got {args.q}")
        return EXIT_USAGE
    cache = _open_cache(args.cache_dir)
    result = gamma_q(args.q, cache, args.em_terms)
    try:
        cache.save()
    except OSError as exc:
        _err(str(exc))
        return EXIT_IO
    log_q = math.log(args.q)
    ratio = result.value / log_q if log_q > 0.0 else math.nan
    print(f"# ekconst gamma q={args.q} em_terms={args.em_terms} "
          f"cache={cache.path}")
    print(f"q = {args.q}")
    print(f"gamma_q = {_g(result.value)}")
    print(f"log_q = {_g(log_q)}")
    print(f"ratio = {_g(ratio)}")
    return EXIT_OK


def cmd_decompose(args) -> int:
    q = args.q
    if q < 1:
        _err(f"q must be >= 1, got {q}")
        return EXIT_USAGE
    bound = args.bound if args.bound is not None else DEFAULT_SIEVE_BOUND
    if not 2 <= bound <= MAX_TABLE_BOUND:
        _err(f"bound must lie in [2, {MAX_TABLE_BOUND}], got {bound}")
        return EXIT_USAGE
    x = args.x if args.x is not None else float(min(max(10**5, q * q), bound))
    if not (q <= x and 1 < x <= bound):
        _err(f"need q <= x <= bound and x > 1, got q={q}, x={x}, "
             f"bound={bound}")
        return EXIT_USAGE
    if args.e is None:
        x_split = float(min(max(q, q * q), x))
    else:
        if args.e <= 0:
            _err(f"split exponent must be positive, got {args.e}")
            return EXIT_USAGE
        x_split = float(q) ** args.e
        if x_split > x:
            _err(f"x_split = q^e = {_g(x_split)} exceeds x = {_g(x)}")
            return EXIT_USAGE
        x_split = float(max(q, x_split))
    tables = build_tables(int(bound))
    cache = _open_cache(args.cache_dir)
    report = decompose(q, x, x_split, tables, cache, args.em_terms)
    try:
        cache.save()
    except OSError as exc:
        _err(str(exc))
        return EXIT_IO
    print(f"# ekconst decompose q={q} x={_g(x)} x_split={_g(x_split)} "
          f"bound={bound} em_terms={args.em_terms} "
          f"residual_tolerance={_g(RESIDUAL_TOLERANCE)}")
    for name, value in asdict(report).items():
        print(f"{name} = {value if isinstance(value, int) else _g(value)}")
    if abs(report.residual) <= RESIDUAL_TOLERANCE:
        print("identity_check = ok")
        return EXIT_OK
    print("identity_check = FAILED")
    return EXIT_CHECK_FAILED


def cmd_scan(args) -> int:
    if args.Q < 2:
        _err(f"Q must be >= 2, got {args.Q}")
        return EXIT_USAGE
    workers = args.workers if args.workers is not None else (os.cpu_count()
                                                             or 1)
    if workers < 1:
        _err(f"workers must be >= 1, got {workers}")
        return EXIT_USAGE
    cache = _open_cache(args.cache_dir)
    records = scan_range(args.Q, cache, args.em_terms, workers)
    try:
        cache.save()
    except OSError as exc:
        _err(str(exc))
        return EXIT_IO
    stat = theorem_statistic(records)
    mean_stat = dyadic_mean(records, args.Q)
    summary = (f"# ekconst scan Q={args.Q} n={stat.n_records} "
               f"em_terms={args.em_terms} workers={workers} "
               f"format={args.format} "
               f"mean_abs_dev={_g(stat.mean_abs_dev)} "
               f"normalized={_g(stat.normalized)} "
               f"dyadic_mean={_g(mean_stat.mean)} "
               f"mean_dev={_g(mean_stat.deviation)}")
    if args.out is not None:
        try:
            emit(records, args.format, args.out)
        except OSError as exc:
            _err(str(exc))
            return EXIT_IO
        print(summary)
        print(f"# wrote {args.out}")
    else:
        sys.stdout.write(render(records, args.format))
        print(summary, file=sys.stderr)
    return EXIT_OK


def cmd_probe(args) -> int:
    x = args.x
    if x < 2:
        _err(f"x must be >= 2, got {x}")
        return EXIT_USAGE
    if not 0.0 < args.epsilon < 1.0:
        _err(f"epsilon must lie in (0, 1), got {args.epsilon}")
        return EXIT_USAGE
    bound = (args.bound if args.bound is not None
             else max(DEFAULT_SIEVE_BOUND, math.ceil(x)))
    if bound > MAX_TABLE_BOUND:
        _err(f"bound {bound} exceeds table capacity {MAX_TABLE_BOUND}")
        return EXIT_USAGE
    if x > bound:
        _err(f"x={_g(x)} exceeds sieve bound {bound}")
        return EXIT_USAGE
    if args.per_m_out is not None and args.out is None:
        _err("--per-m-out requires --out")
        return EXIT_USAGE
    tables = build_tables(int(bound))
    probe = eh_probe(x, args.epsilon, tables,
                     prime_powers=args.prime_powers)
    checked = min(probe.m_max, SELF_CHECK_MODULI)
    tolerance = SELF_CHECK_TOL * max(1.0, x / SELF_CHECK_BASE_X)
    worst = 0.0
    for m in range(1, checked + 1):
        lhs, rhs = residue_sum_check(m, x, tables,
                                     prime_powers=args.prime_powers)
        worst = max(worst, abs(lhs - rhs))
    ok = worst <= tolerance
    print(f"# ekconst probe x={_g(x)} epsilon={_g(args.epsilon)} "
          f"bound={bound} prime_powers={args.prime_powers} "
          f"format={args.format}")
    print(f"# m_max={probe.m_max} total={_g(probe.total)} "
          f"selfcheck={'ok' if ok else 'FAILED'} checked_m={checked} "
          f"worst={worst:.3e} tolerance={tolerance:.3e}")
    if args.out is not None:
        try:
            emit(probe, args.format, args.out, per_m_path=args.per_m_out)
        except OSError as exc:
            _err(str(exc))
            return EXIT_IO
        print(f"# wrote {args.out}")
        if args.per_m_out is not None:
            print(f"# wrote {args.per_m_out}")
    else:
        sys.stdout.write(render(probe, args.format))
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_cache(args) -> int:
    path = ConductorCache.default_path(args.cache_dir)
    if args.action == "clear":
        try:
            ConductorCache(path, load=False).clear()
        except OSError as exc:
            _err(str(exc))
            return EXIT_IO
        print(f"# cleared {path}")
        return EXIT_OK
    if args.action == "verify":
        try:
            rows = ConductorCache(path, load=False).verify()
        except CacheCorruption as exc:
            where = f" (conductor {exc.q})" if exc.q is not None else ""
            _err(f"cache corrupted{where}: {exc}")
            return EXIT_IO
        except OSError as exc:
            _err(str(exc))
            return EXIT_IO
        print(f"# cache={path} ok entries={len(rows)}")
        return EXIT_OK
    try:
        cache = ConductorCache(path)
    except CacheCorruption as exc:
        _err(f"cache corrupted: {exc}")
        return EXIT_IO
    except OSError as exc:
        _err(str(exc))
        return EXIT_IO
    print(f"# cache={path} entries={len(cache)}")
    for rec in cache.records():
        print(f"{rec.q},{rec.total!r},{rec.imag_residual!r},{rec.tag}")
    return EXIT_OK


def _add_cache_options(sub) -> None:
    sub.add_argument("--em-terms", type=int, default=DEFAULT_EM_TERMS,
                     metavar="N",
                     help="Laurent-tail terms in the special-function "
                          f"evaluation; names the precision tag (default "
                          f"{DEFAULT_EM_TERMS})")
    sub.add_argument("--cache-dir", default=None, metavar="DIR",
                     help="conductor cache directory (default: "
                          "$EKCONST_CACHE_DIR or ~/.cache/ekconst)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ekconst",
        description="Euler-Kronecker constants of cyclotomic fields: "
                    "per-modulus values, exact decomposition self-checks, "
                    "dyadic-range scans, progression-error probes.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gamma = sub.add_parser(
        "gamma", help="compute gamma_q for one modulus")
    p_gamma.add_argument("q", type=int)
    _add_cache_options(p_gamma)
    p_gamma.set_defaults(func=cmd_gamma)

    p_dec = sub.add_parser(
        "decompose",
        help="evaluate the seven-term identity and self-check its residual")
    p_dec.add_argument("q", type=int)
    p_dec.add_argument("--x", type=float, default=None,
                       help="prime-sum cutoff (default max(1e5, q^2), "
                            "capped at the sieve bound)")
    p_dec.add_argument("--e", type=float, default=None,
                       help="window split exponent: x_split = q^e clamped "
                            f"to [q, x] (default {DEFAULT_SPLIT_EXPONENT:g}; "
                            "an explicit value with q^e > x is rejected)")
    p_dec.add_argument("--bound", type=int, default=None,
                       help=f"sieve table bound (default "
                            f"{DEFAULT_SIEVE_BOUND})")
    _add_cache_options(p_dec)
    p_dec.set_defaults(func=cmd_decompose)

    p_scan = sub.add_parser(
        "scan", help="scan the dyadic block (Q, 2Q] and print statistics")
    p_scan.add_argument("Q", type=int)
    p_scan.add_argument("--out", default=None, metavar="PATH",
                        help="output file (default: records to stdout, "
                             "summary to stderr)")
    p_scan.add_argument("--format", choices=("csv", "json", "plotdata"),
                        default="csv")
    p_scan.add_argument("--workers", type=int, default=None,
                        help="parallel conductor workers (default: cpu "
                             "count)")
    _add_cache_options(p_scan)
    p_scan.set_defaults(func=cmd_scan)

    p_probe = sub.add_parser(
        "probe",
        help="progression-error totals over levels m <= x^(1-epsilon)")
    p_probe.add_argument("x", type=float)
    p_probe.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p_probe.add_argument("--out", default=None, metavar="PATH")
    p_probe.add_argument("--per-m-out", dest="per_m_out", default=None,
                         metavar="PATH",
                         help="also write the per-level table (needs --out)")
    p_probe.add_argument("--format", choices=("csv", "json", "plotdata"),
                         default="csv")
    p_probe.add_argument("--prime-powers", action="store_true",
                         help="weight prime powers instead of primes")
    p_probe.add_argument("--bound", type=int, default=None,
                         help="sieve table bound (default: "
                              f"max({DEFAULT_SIEVE_BOUND}, x))")
    p_probe.set_defaults(func=cmd_probe)

    p_cache = sub.add_parser("cache", help="conductor cache management")
    p_cache.add_argument("action", choices=("list", "clear", "verify"))
    p_cache.add_argument("--cache-dir", default=None, metavar="DIR")
    p_cache.set_defaults(func=cmd_cache)
    return parser


def entry(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 after --help
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except CacheCorruption as exc:
        _err(f"cache corrupted: {exc}")
        return EXIT_IO
    except OSError as exc:
        _err(str(exc))
        return EXIT_IO
    except ValueError as exc:
        _err(str(exc))
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(entry())
