"""Command-line front end.

Data (series or jet files) go to ``--out`` or, without it, to stdout.  The
``key: value`` report goes to stdout when data went to a file, otherwise to
stderr.  Exit codes: 0 pass, 1 fail or mismatch, 2 usage or parse error,
3 numeric abort (order detection failure, truncated recovery, domain exit,
negative leading coefficient without ``--reflect``).
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
import warnings
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import acceptance
from .analysis import (
    default_delta,
    flatness_inequality_check,
    holder_estimate,
    holder_exponent_for_jet,
    jet_bundle,
    jet_difference_bundle,
)
from .corpus import BUILTIN_BUNDLES, BUILTIN_FUNCTIONS, builtin_bundle, builtin_function
from .formats import ParseError, format_value, parse_jet, parse_puiseux, serialize_jet, serialize_puiseux
from .forward import NonPositiveLeadingError, default_grid, forward_map, ledger, residual_check
from .puiseux import to_callable
from .recovery import (
    DomainExitError,
    InconsistentSeries,
    ProbeConfig,
    RecoveryError,
    crosscheck_uniqueness,
    recover_jet_numeric,
    recover_jet_symbolic,
)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_ABORT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class Report:
    """Ordered ``key: value`` lines."""

    def __init__(self, command: str):
        self.items: list = [("command", command)]

    def add(self, key: str, value) -> None:
        self.items.append((key, value))

    def render(self) -> str:
        return "".join(f"{k}: {_fmt(v)}\n" for k, v in self.items)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating, Fraction)):
        return format_value(value)
    return str(value)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_jet(path: str):
    return parse_jet(_read(path))


def _load_series(path: str):
    return parse_puiseux(_read(path))


def _emit(args, report: Report, data: str | None = None) -> None:
    if data is not None and args.out:
        Path(args.out).write_text(data, encoding="utf-8")
        sys.stdout.write(report.render())
    elif data is not None:
        sys.stdout.write(data)
        sys.stderr.write(report.render())
    else:
        sys.stdout.write(report.render())


def parse_grid(spec: str) -> list:
    """``log:A:B:N`` (geometric), ``lin:A:B:N`` or a comma-separated list."""
    try:
        if spec.startswith(("log:", "lin:")):
            kind, a, b, count = spec.split(":")
            a, b, count = float(a), float(b), int(count)
            if count < 1:
                raise ValueError
            pts = np.geomspace(a, b, count) if kind == "log" else np.linspace(a, b, count)
            return [float(x) for x in pts]
        return [float(x) for x in spec.split(",")]
    except ValueError:
        raise UsageError(f"bad grid spec {spec!r}; use log:A:B:N, lin:A:B:N or a comma list") from None


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


# -- commands -----------------------------------------------------------------

def cmd_forward(args) -> int:
    jet = _load_jet(args.jet)
    report = Report("forward")
    report.add("n", jet.n)
    report.add("m", jet.m)
    report.add("field", jet.field)
    report.add("terms", args.terms)
    try:
        ps = forward_map(jet, args.terms, reflect=args.reflect)
    except NonPositiveLeadingError as exc:
        report.add("status", "abort")
        report.add("error", str(exc))
        _emit(args, report)
        return EXIT_ABORT
    reflected = jet.a < 0
    used = jet.negated() if reflected else jet
    report.add("reflected", reflected)
    report.add("leading_coefficient", ps.coeff(0))
    if args.terms >= 1:
        report.add("b2", ledger(used, args.terms).b[2])
    try:
        res = residual_check(used, ps, default_grid())
    except ValueError as exc:
        report.add("status", "abort")
        report.add("error", f"residual check: {exc}")
        _emit(args, report, serialize_puiseux(ps))
        return EXIT_ABORT
    report.add("residual_slope", res.slope)
    report.add("residual_expected", res.expected_order)
    report.add("residual_exact_points", res.exact_points)
    report.add("status", "pass" if res.passed else "fail")
    _emit(args, report, serialize_puiseux(ps))
    return EXIT_PASS if res.passed else EXIT_FAIL


def _probe_config(args) -> ProbeConfig:
    changes = {k: getattr(args, k) for k in ("u0", "rho", "depth") if getattr(args, k) is not None}
    if "rho" in changes and not 0 < changes["rho"] < 1:
        raise UsageError("--rho must lie in (0, 1)")
    if "depth" in changes and changes["depth"] < 2:
        raise UsageError("--depth must be at least 2")
    return dataclasses.replace(ProbeConfig(reflect=args.reflect), **changes)


def cmd_recover(args) -> int:
    if (args.f is None) == (args.builtin is None):
        raise UsageError("give exactly one of --f and --builtin")
    report = Report("recover")
    if args.f is not None:
        ps = _load_series(args.f)
        if args.n is not None and args.n != ps.n:
            raise UsageError(f"--n {args.n} disagrees with the series file (n = {ps.n})")
        n = ps.n
        mode = args.mode or "symbolic"
        handle = to_callable(ps)
        source = args.f
    else:
        if args.mode == "symbolic":
            raise UsageError("symbolic mode needs a series file (--f)")
        handle = builtin_function(args.builtin)
        n = args.n if args.n is not None else BUILTIN_FUNCTIONS[args.builtin][1]
        mode = "numeric"
        source = f"builtin {args.builtin}"
    report.add("source", source)
    report.add("mode", mode)
    report.add("n", n)
    try:
        if mode == "symbolic":
            K = ps.trunc_j if args.terms is None else args.terms
            if K > ps.trunc_j:
                raise UsageError(f"--terms {K} exceeds the series' terms (through j = {ps.trunc_j})")
            rec = recover_jet_symbolic(ps, K)
        else:
            K = 3 if args.terms is None else args.terms
            rec = recover_jet_numeric(handle, n, K, _probe_config(args))
    except InconsistentSeries as exc:
        report.add("status", "fail")
        report.add("error", f"{type(exc).__name__}: {exc}")
        _emit(args, report)
        return EXIT_FAIL
    except RecoveryError as exc:
        report.add("status", "abort")
        report.add("error", f"{type(exc).__name__}: {exc}")
        _emit(args, report)
        return EXIT_ABORT
    report.add("m", rec.m)
    report.add("a", rec.a)
    report.add("reflected", rec.reflected)
    report.add("requested", rec.requested)
    report.add("recovered", len(rec.diagnostics) - 1)
    for d in rec.diagnostics:
        report.add(f"stage_{d.stage}_limit", d.limit)
        report.add(f"stage_{d.stage}_error", d.error)
    report.add("truncated", rec.truncated)
    if rec.truncated:
        report.add("error", rec.message)
    report.add("status", "abort" if rec.truncated else "pass")
    _emit(args, report, serialize_jet(rec.jet))
    return EXIT_ABORT if rec.truncated else EXIT_PASS


def cmd_verify(args) -> int:
    jet = _load_jet(args.jet)
    ps = _load_series(args.f)
    if not 0 < args.t0 <= args.t1 < 1:
        raise UsageError("need 0 < t0 <= t1 < 1")
    if args.grid < 2:
        raise UsageError("--grid needs at least 2 points")
    report = Report("verify")
    report.add("t0", args.t0)
    report.add("t1", args.t1)
    try:
        verdict = crosscheck_uniqueness(ps, [jet], args.t0, args.t1, steps=args.steps,
                                        rtol=args.rtol, grid=default_grid(args.grid))
    except (DomainExitError, ValueError) as exc:
        report.add("status", "abort")
        report.add("error", str(exc))
        _emit(args, report)
        return EXIT_ABORT
    res = verdict.residuals[0]
    report.add("residual_slope", res.slope)
    report.add("residual_expected", res.expected_order)
    report.add("residual_pass", res.passed)
    report.add("endpoint_relative_error", verdict.endpoint_errors[0])
    for note in verdict.notes:
        report.add("note", note)
    report.add("status", "pass" if verdict.passed else "fail")
    _emit(args, report)
    return EXIT_PASS if verdict.passed else EXIT_FAIL


def cmd_holder(args) -> int:
    sources = [s for s in (args.builtin, args.f, args.jet) if s is not None]
    if len(sources) != 1:
        raise UsageError("give exactly one of --builtin, --f and --jet")
    alpha, delta = args.alpha, args.delta
    if args.jet is not None:
        jet = _load_jet(args.jet)
        handle = to_callable(forward_map(jet, args.terms, reflect=args.reflect))
        alpha = holder_exponent_for_jet(jet) if alpha is None else alpha
        delta = default_delta(jet) if delta is None else delta
    elif args.f is not None:
        handle = to_callable(_load_series(args.f))
    else:
        handle = builtin_function(args.builtin)
    if alpha is None:
        raise UsageError("--alpha is required unless --jet is given")
    if not 0 < alpha <= 1:
        raise UsageError("--alpha must lie in (0, 1]")
    delta = 1.0 if delta is None else delta
    if delta <= 0 or args.samples < 2:
        raise UsageError("need --delta > 0 and --samples >= 2")
    est = holder_estimate(handle, alpha, delta, args.samples, args.seed)
    report = Report("holder")
    report.add("source", sources[0])
    report.add("alpha", est.alpha)
    report.add("delta", est.delta)
    report.add("seed", args.seed)
    report.add("pairs", est.pairs)
    report.add("max_quotient", est.max_quotient)
    report.add("argmax_u1", est.argmax[0])
    report.add("argmax_u2", est.argmax[1])
    report.add("constant", est.constant)
    report.add("status", "pass")
    _emit(args, report)
    return EXIT_PASS


def cmd_flatness(args) -> int:
    if (args.builtin is None) == (args.jet is None):
        raise UsageError("give exactly one of --builtin and --jet")
    if args.minus is not None and args.jet is None:
        raise UsageError("--minus needs --jet")
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    if args.jet is not None:
        u = _load_jet(args.jet)
        bundle = jet_difference_bundle(u, _load_jet(args.minus)) if args.minus else jet_bundle(u)
    else:
        bundle = builtin_bundle(args.builtin)
    grid = parse_grid(args.grid)
    if any(not 0 < x <= 1 for x in grid):
        raise UsageError("grid points must lie in (0, 1]")
    check = flatness_inequality_check(bundle, args.n, grid, args.c_max)
    report = Report("flatness")
    report.add("source", bundle.name)
    report.add("n", args.n)
    for i, (x, r) in enumerate(zip(check.grid, check.ratios)):
        report.add(f"ratio_{i}", f"{_fmt(x)} {_fmt(r)}")
    report.add("sup_ratio", check.sup_ratio)
    report.add("c_max", check.c_max)
    report.add("zero_over_zero", check.zero_over_zero)
    report.add("infinite", check.infinite)
    verdict = "bounded" if check.bounded else "unbounded"
    report.add("verdict", verdict)
    ok = args.expect is None or args.expect == verdict
    report.add("status", "pass" if ok else "fail")
    _emit(args, report)
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_selftest(args) -> int:
    results = acceptance.run_all()
    for r in results:
        print(r.line(timings=args.timings))
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} criteria passed")
    return EXIT_PASS if passed == len(results) else EXIT_FAIL


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    seed_default = int(os.environ.get("JETREC_SEED", "0"))
    p = argparse.ArgumentParser(prog="jetrec", description="Jets of solutions of u^(n) = f(u) and Puiseux expansions of f.")
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("forward", help="jet -> Puiseux series of f")
    f.add_argument("--jet", required=True, help="jet file")
    f.add_argument("--terms", type=int, required=True, help="number J of terms after the leading one")
    f.add_argument("--out", help="write the series here (report then goes to stdout)")
    f.add_argument("--reflect", action="store_true", help="allow a < 0 by expanding for -u")
    f.set_defaults(func=cmd_forward)

    r = sub.add_parser("recover", help="f -> m, a and the jet")
    r.add_argument("--f", help="series file")
    r.add_argument("--builtin", choices=sorted(BUILTIN_FUNCTIONS), help="built-in right-hand side")
    r.add_argument("--n", type=int, help="equation order (read from --f when omitted)")
    r.add_argument("--terms", type=int, help="coefficients to recover after a")
    r.add_argument("--mode", choices=["symbolic", "numeric"], help="default: symbolic for --f, numeric for --builtin")
    r.add_argument("--u0", type=float, help="first sample point (default 1e-2)")
    r.add_argument("--rho", type=float, help="mesh ratio (default 0.5)")
    r.add_argument("--depth", type=int, help="mesh depth (default 20)")
    r.add_argument("--reflect", action="store_true", help="accept f < 0 near 0 by reflection")
    r.add_argument("--out", help="write the jet here (report then goes to stdout)")
    r.set_defaults(func=cmd_recover)

    v = sub.add_parser("verify", help="residual and RK4 check of a jet against a series")
    v.add_argument("--jet", required=True)
    v.add_argument("--f", required=True)
    v.add_argument("--t0", type=float, default=0.1)
    v.add_argument("--t1", type=float, default=0.5)
    v.add_argument("--grid", type=int, default=7, help="residual grid points 0.1 * 2^-i")
    v.add_argument("--steps", type=int, default=10_000)
    v.add_argument("--rtol", type=float, default=1e-6)
    v.set_defaults(func=cmd_verify)

    h = sub.add_parser("holder", help="sampled Hölder quotient of f")
    h.add_argument("--builtin", choices=sorted(BUILTIN_FUNCTIONS))
    h.add_argument("--f", help="series file")
    h.add_argument("--jet", help="jet file; uses its forward series")
    h.add_argument("--terms", type=int, default=4, help="series terms for --jet")
    h.add_argument("--reflect", action="store_true")
    h.add_argument("--alpha", type=_rational, help="exponent, e.g. 1/3 (default 1/m for --jet)")
    h.add_argument("--delta", type=float, help="interval [0, delta]")
    h.add_argument("--samples", type=int, default=10_000)
    h.add_argument("--seed", type=int, default=seed_default, help="default: $JETREC_SEED or 0")
    h.set_defaults(func=cmd_holder)

    fl = sub.add_parser("flatness", help="ratio |g^(n)| / sum |g^(k)| / x^(n-k) on a grid")
    fl.add_argument("--builtin", choices=sorted(BUILTIN_BUNDLES))
    fl.add_argument("--jet", help="jet file (its polynomial solution)")
    fl.add_argument("--minus", help="second jet file; checks the difference of the two solutions")
    fl.add_argument("--n", type=int, required=True)
    fl.add_argument("--grid", default="log:1e-1:1e-6:6")
    fl.add_argument("--c-max", dest="c_max", type=float, default=1e3)
    fl.add_argument("--expect", choices=["bounded", "unbounded"], help="exit 1 unless the verdict matches")
    fl.set_defaults(func=cmd_flatness)

    s = sub.add_parser("selftest", help="run the acceptance suite")
    s.add_argument("--timings", action="store_true", help="append run times (output is then not byte-stable)")
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv: list | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            code = args.func(args)
        except (UsageError, ParseError) as exc:
            msg = exc.args[0] if exc.args else str(exc)
            print(f"jetrec {args.command}: error: {msg}", file=sys.stderr)
            code = EXIT_USAGE
    for w in caught:
        print(f"jetrec {args.command}: warning: {w.message}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
