"""Command line front end.

One subcommand per experiment plus exact-computation helpers.  Config
can come from a key=value file (--config) with individual flags taking
precedence.  Exit codes: 0 success, 1 configuration problem, 2 exhausted
arithmetic budget, 3 self-test failure.
"""

import argparse
import sys

import numpy as np

from .arith import liouville_sieve, mobius_sieve
from .errors import BudgetError, ConfigError
from .experiments import ExperimentConfig, run_experiment
from .gowers import gowers_norm_cyclic, interval_embedding
from .moments import poisson_central_moment, stein_chen_check
from .poly import IntPolynomial, poly_from_text, sample_uniform
from .rng import stream
from .runio import (format_cell, parse_bool, parse_float, parse_int_exact,
                    parse_int_list, parse_pattern, load_config_file,
                    utc_now_iso, write_csv, write_manifest_generic,
                    write_run)
from .series import interchange_identity_check, series_f, series_f_tuple

EXPERIMENT_SUBCOMMANDS = ("bh-moments", "tuples", "chowla-clt",
                          "sign-patterns", "poisson-gaps", "linear-forms")

COMMON_KEYS = ("d", "H", "X", "w", "samples", "seed", "workers", "k-max",
               "out-dir", "deterministic-reduction")
EXTRA_KEYS = {
    "bh-moments": (),
    "tuples": ("shifts",),
    "chowla-clt": (),
    "sign-patterns": ("pattern",),
    "poisson-gaps": ("calL", "L"),
    "linear-forms": ("ns", "M", "f0", "target"),
}
REQUIRED_KEYS = ("d", "H", "X", "samples", "seed")
DEFAULTS = {"w": "5", "workers": "1", "k-max": "4", "calL": "1.0",
            "L": "0", "deterministic-reduction": "true", "M": "1",
            "f0": "0", "ns": "1", "target": "von-mangoldt"}


class _Parser(argparse.ArgumentParser):
    """argparse that reports bad usage as a ConfigError (exit code 1)."""

    def error(self, message):
        raise ConfigError(message)


def _experiment_flags(sub):
    sub.add_argument("--config", help="key=value config file")
    for key, hlp in (
            ("d", "polynomial degree bound"),
            ("H", "coefficient bound (scientific notation ok, e.g. 1e7)"),
            ("X", "summation range 1..X"),
            ("w", "series truncation: primes p <= w (default 5)"),
            ("samples", "number of sampled polynomials"),
            ("seed", "master seed for the per-sample streams"),
            ("workers", "worker processes (default 1)"),
            ("k-max", "largest moment order reported (default 4)"),
            ("out-dir", "output directory (default runs/<subcommand>)"),
            ("deterministic-reduction",
             "true/false; reductions are always run in fixed order and "
             "this flag records that choice in the manifest")):
        sub.add_argument(f"--{key}", dest=key.replace("-", "_"),
                         metavar="V", help=hlp)


def _build_cfg(kind: str, args) -> ExperimentConfig:
    allowed = set(COMMON_KEYS) | set(EXTRA_KEYS[kind])
    merged = {k: v for k, v in DEFAULTS.items() if k in allowed}
    if getattr(args, "config", None):
        for key, value in load_config_file(args.config).items():
            if key not in allowed:
                raise ConfigError(f"unknown config key {key!r} for {kind}")
            merged[key] = value
    for key in allowed:
        v = getattr(args, key.replace("-", "_"), None)
        if v is not None:
            merged[key] = v
    for key in REQUIRED_KEYS:
        if key not in merged:
            raise ConfigError(f"missing required config value {key!r}")
    for key in EXTRA_KEYS[kind]:
        if key not in merged:
            raise ConfigError(f"missing required config value {key!r}")
    cfg = ExperimentConfig(
        kind=kind,
        d=parse_int_exact(merged["d"], "d"),
        H=parse_int_exact(merged["H"], "H"),
        X=parse_int_exact(merged["X"], "X"),
        samples=parse_int_exact(merged["samples"], "samples"),
        seed=parse_int_exact(merged["seed"], "seed"),
        w=parse_int_exact(merged["w"], "w"),
        workers=parse_int_exact(merged["workers"], "workers"),
        k_max=parse_int_exact(merged["k-max"], "k-max"),
        shifts=parse_int_list(merged["shifts"], "shifts")
        if "shifts" in merged else (),
        pattern=parse_pattern(merged["pattern"])
        if "pattern" in merged else (),
        calL=parse_float(merged.get("calL", "1.0"), "calL"),
        L=parse_int_exact(merged.get("L", "0"), "L"),
        ns=parse_int_list(merged.get("ns", "1"), "ns"),
        M=parse_int_exact(merged.get("M", "1"), "M"),
        f0=tuple(poly_from_text(merged.get("f0", "0")).coeffs),
        target=merged.get("target", "von-mangoldt"),
        deterministic_reduction=parse_bool(
            merged.get("deterministic-reduction", "true"),
            "deterministic-reduction"),
    ).validate()
    return cfg, merged.get("out-dir", f"runs/{kind}")


def _run_experiment_cmd(kind: str, args) -> int:
    cfg, out_dir = _build_cfg(kind, args)
    started = utc_now_iso()
    result = run_experiment(cfg)
    finished = utc_now_iso()
    paths = write_run(out_dir, result, started, finished)
    print(f"{kind}: {cfg.samples} samples, seed {cfg.seed}")
    def short(x):
        import math as _m

        return "-" if _m.isnan(x) else f"{x:.6g}"

    print(f"{'key':<14}{'estimate':>14}{'stderr':>12}"
          f"{'predicted':>12}  verdict")
    for row in result.aggregates:
        print(f"{row.key:<14}{row.estimate:>14.6g}"
              f"{short(row.stderr):>12}{short(row.predicted):>12}"
              f"  {row.verdict}")
    for warning in result.warnings:
        print(f"warning: {warning}")
    print(f"wrote {paths['samples']}, {paths['aggregates']}, "
          f"{paths['manifest']}")
    return 0


def _series_cmd(args) -> int:
    f = poly_from_text(args.poly)
    w = parse_int_exact(args.w, "w")
    if args.shifts:
        ts = series_f_tuple(f, parse_int_list(args.shifts, "shifts"), w)
    else:
        ts = series_f(f, w)
    if args.factors:
        for p, fac in ts.local_factors:
            print(f"p={p} factor={fac.numerator}/{fac.denominator}")
    print(ts.to_text())
    return 0


def _gowers_values(target: str, mode: str, size: int, multiplier: int):
    """(values array, domain label) for one gowers CSV row."""
    if mode == "cyclic":
        M = size
        if target == "one":
            return np.ones(M), M
        if target == "delta":
            arr = np.zeros(M)
            arr[0] = 1.0
            return arr, M
        sieve = liouville_sieve(M) if target == "liouville" \
            else mobius_sieve(M)
        arr = np.zeros(M)
        for n in range(1, M + 1):
            arr[n % M] = float(sieve[n])
        return arr, M
    N = size
    if target == "one":
        func = lambda n: 1.0
    elif target == "delta":
        func = lambda n: 1.0 if n == 1 else 0.0
    else:
        sieve = liouville_sieve(N) if target == "liouville" \
            else mobius_sieve(N)
        func = lambda n: float(sieve[n])
    arr, M = interval_embedding(func, N, multiplier=multiplier)
    return arr, N


def _gowers_cmd(args) -> int:
    if bool(args.N) == bool(args.M):
        raise ConfigError("give exactly one of --N (interval) or "
                          "--M (cyclic)")
    mode = "interval" if args.N else "cyclic"
    sizes = parse_int_list(args.N or args.M, "N" if args.N else "M")
    s = parse_int_exact(args.s, "s")
    multiplier = parse_int_exact(args.multiplier, "multiplier")
    if args.target not in ("one", "delta", "liouville", "mobius"):
        raise ConfigError(f"unknown gowers target {args.target!r}")
    rows = []
    for size in sizes:
        values, label = _gowers_values(args.target, mode, size, multiplier)
        norm = gowers_norm_cyclic(values, s)
        rows.append([label, s, norm])
    fields = ["N" if mode == "interval" else "M", "s", "norm"]
    for row in rows:
        print(",".join(format_cell(v) for v in row))
    if args.out_dir:
        import os

        os.makedirs(args.out_dir, exist_ok=True)
        path = os.path.join(args.out_dir, "gowers.csv")
        write_csv(path, fields, rows)
        write_manifest_generic(
            os.path.join(args.out_dir, "manifest.json"),
            subcommand="gowers",
            config={"target": args.target, "mode": mode,
                    "sizes": list(sizes), "s": s,
                    "multiplier": multiplier},
            outputs={"csv": "gowers.csv"})
        print(f"wrote {path}")
    return 0


def _selftest_cmd(args) -> int:
    failures = 0

    def report(name, ok):
        nonlocal failures
        print(f"{name}: {'ok' if ok else 'FAIL'}")
        if not ok:
            failures += 1

    report("stein-chen identity (l <= 12)",
           all(stein_chen_check(ell) for ell in range(13)))

    try:
        for k in range(13):
            poisson_central_moment(k)
        ok = (poisson_central_moment(1).coeffs == (0,)
              and poisson_central_moment(2).coeffs == (0, 1)
              and poisson_central_moment(4).coeffs == (0, 1, 3))
    except Exception:
        ok = False
    report("central moment definition vs recurrence (k <= 12)", ok)

    n = 10 ** 6
    lam = liouville_sieve(n).astype(np.int64)
    mu = mobius_sieve(n).astype(np.int64)
    acc = np.zeros(n + 1, dtype=np.int64)
    r = 1
    while r * r <= n:
        step = r * r
        m = n // step
        acc[step:: step] += mu[1: m + 1]
        r += 1
    report("liouville equals mobius summed over square divisors (n <= 1e6)",
           bool(np.array_equal(acc[1:], lam[1:])))

    rng = stream(20260818, 0)
    ok = True
    for p in (2, 3, 5, 7, 11, 13):
        for r in (1, 2, 3):
            for _ in range(20):
                f = sample_uniform(3, 50, rng)
                if not interchange_identity_check(f, p, r):
                    ok = False
    report("series interchange identity (p <= 13, r <= 3)", ok)

    return 3 if failures else 0


def build_parser() -> _Parser:
    parser = _Parser(prog="polyprime",
                     description="Prime values of random polynomials: "
                                 "exact series, moment identities, and "
                                 "seeded Monte Carlo experiments.")
    sub = parser.add_subparsers(dest="subcommand", parser_class=_Parser)

    for kind, blurb in (
            ("bh-moments", "moments of the averaged von Mangoldt "
                           "statistic minus its truncated series"),
            ("tuples", "shifted-tuple version of the von Mangoldt "
                       "statistic"),
            ("chowla-clt", "normalized Liouville sums along random "
                           "polynomials against Gaussian moments"),
            ("sign-patterns", "Liouville sign-pattern counts against "
                              "the predicted variance"),
            ("poisson-gaps", "prime counts in tuned windows against "
                             "Poisson and Gaussian predictions"),
            ("linear-forms", "products of arithmetic functions at fixed "
                             "points over a residue-constrained family")):
        s = sub.add_parser(kind, help=blurb)
        _experiment_flags(s)
        if kind == "tuples":
            s.add_argument("--shifts", metavar="V",
                           help="comma-separated distinct shifts, "
                                "e.g. 0,2")
        if kind == "sign-patterns":
            s.add_argument("--pattern", metavar="V",
                           help="sign pattern, e.g. ++ or +1,-1")
        if kind == "poisson-gaps":
            s.add_argument("--calL", metavar="V",
                           help="target mean window count (default 1.0)")
            s.add_argument("--L", metavar="V",
                           help="fixed window length override")
        if kind == "linear-forms":
            s.add_argument("--ns", metavar="V",
                           help="comma-separated distinct evaluation "
                                "points (default 1)")
            s.add_argument("--M", metavar="V",
                           help="residue modulus (default 1)")
            s.add_argument("--f0", metavar="V",
                           help="residue polynomial, a0;a1;... "
                                "(default 0)")
            s.add_argument("--target", metavar="V",
                           help="von-mangoldt or liouville")

    s = sub.add_parser("series", help="print an exact truncated series")
    s.add_argument("--poly", required=True, metavar="V",
                   help="coefficients a0;a1;... e.g. 2;1;1")
    s.add_argument("--w", required=True, metavar="V",
                   help="truncation bound")
    s.add_argument("--shifts", metavar="V",
                   help="optional distinct shifts for the tuple series")
    s.add_argument("--factors", action="store_true",
                   help="also print the per-prime local factors")

    s = sub.add_parser("gowers", help="uniformity norms of standard "
                                      "sequences")
    s.add_argument("--target", required=True, metavar="V",
                   help="one, delta, liouville, or mobius")
    s.add_argument("--N", metavar="V",
                   help="comma list of interval lengths")
    s.add_argument("--M", metavar="V",
                   help="comma list of cyclic group sizes")
    s.add_argument("--s", default="2", metavar="V", help="norm order")
    s.add_argument("--multiplier", default="5", metavar="V",
                   help="embedding modulus is least prime >= "
                        "multiplier*N (default 5)")
    s.add_argument("--out-dir", dest="out_dir", metavar="V",
                   help="also write gowers.csv and a manifest here")

    sub.add_parser("selftest", help="run the exact identity suites")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.subcommand:
            parser.print_help()
            return 1
        if args.subcommand in EXPERIMENT_SUBCOMMANDS:
            return _run_experiment_cmd(args.subcommand, args)
        if args.subcommand == "series":
            return _series_cmd(args)
        if args.subcommand == "gowers":
            return _gowers_cmd(args)
        if args.subcommand == "selftest":
            return _selftest_cmd(args)
        raise ConfigError(f"unknown subcommand {args.subcommand!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except BudgetError as exc:
        print(f"budget error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
