"""Command-line entry point.

    dottie <subcommand> [--method M] [--precision P] [--terms N] [--format F] [--out PATH]

Subcommands: compute, coeffs, verify, convergence, approx, engel.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
from pathlib import Path

from . import approx, connections, verify
from .mp_eval import (
    CONVERGENCE_METHODS,
    convergence_report,
    dottie_cosine_iteration,
    dottie_newton,
    eval_kaplan_partial,
    newton_iterations,
)
from .precision import MethodResult, PrecisionContext, default_guard_digits, to_decimal_string
from .series import kaplan_coefficients_lagrange, kaplan_coefficients_reversion

COMPUTE_METHODS = (
    "newton", "cosine_iteration", "kaplan", "kepler", "beta", "bertrand", "bessel", "kapteyn",
)
FORMATS = ("text", "json", "csv")
DEFAULT_PRECISION = 50
DEFAULT_TERMS = 1000

DEFAULT_COUNTS = {
    "kaplan": list(range(1, 17)),
    "cosine_iteration": [10, 20, 40, 80, 160],
    "bessel_series": [1, 2, 4, 8, 16, 32, 64, 128],
}


class UsageError(Exception):
    pass


def _common(p: argparse.ArgumentParser, *, method=False, terms=True) -> None:
    if method:
        p.add_argument("--method", "-m", default=None)
    p.add_argument("--precision", "-p", type=int, default=DEFAULT_PRECISION)
    if terms:
        p.add_argument("--terms", "-n", type=int, default=None)
    p.add_argument("--format", "-f", choices=FORMATS, default=None)
    p.add_argument("--out", "-o", default=None, help="output path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dottie", description="Compute and cross-verify the Dottie number (cos x = x)."
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("compute", help="compute D by one method")
    _common(p, method=True)

    p = sub.add_parser("coeffs", help="exact Kaplan coefficients a_n")
    _common(p, method=True, terms=False)
    p.add_argument("--max-n", type=int, default=11)

    p = sub.add_parser("verify", help="cross-verify every route against the oracle")
    p.add_argument("suite", nargs="?", choices=("all", "pi-series"), default="all")
    _common(p)

    p = sub.add_parser("convergence", help="error table against term count")
    _common(p, method=True)
    p.add_argument("--counts", default=None, help="comma-separated term counts")

    p = sub.add_parser("approx", help="closed-form approximants with digit scores")
    _common(p, method=True, terms=False)

    p = sub.add_parser("engel", help="Engel expansion of D")
    _common(p)
    return parser


def _ctx(args) -> PrecisionContext:
    try:
        return PrecisionContext(args.precision, default_guard_digits())
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _compute(args) -> tuple[str, int]:
    method = args.method or "newton"
    if method not in COMPUTE_METHODS:
        raise UsageError(f"unknown method {method!r}; choose from {', '.join(COMPUTE_METHODS)}")
    ctx = _ctx(args)
    d = dottie_newton(ctx)
    terms = args.terms
    if method == "newton":
        res = MethodResult("newton", d, ctx, newton_iterations(ctx), ctx.mp.zero)
    elif method == "cosine_iteration":
        res = dottie_cosine_iteration(ctx, terms or DEFAULT_TERMS)
    elif method == "kaplan":
        n = terms or 16
        res = eval_kaplan_partial(kaplan_coefficients_reversion(2 * n - 1 if n else 1), n, ctx)
    elif method == "bessel":
        res = connections.dottie_bessel_partial(terms or 200, "corrected", ctx)
    elif method == "kapteyn":
        n = terms or 10
        val = connections.kapteyn_integral_partial(n, max(64, 64 * n), ctx)
        res = MethodResult("kapteyn", val, ctx, n, abs(val - d))
    else:
        fn = {
            "kepler": connections.dottie_via_kepler,
            "beta": connections.dottie_via_beta,
            "bertrand": connections.bertrand_angle,
        }[method]
        val = fn(ctx)
        res = MethodResult(method, val, ctx, 0, abs(val - d))
    fmt = args.format or "text"
    if fmt == "json":
        return json.dumps(res.to_dict()) + "\n", 0
    if fmt == "csv":
        return verify.render_csv([res.to_dict()], ("method", "value", "precision", "terms", "abs_error")), 0
    return ctx.to_str(res.value) + "\n", 0


def _coeffs(args) -> tuple[str, int]:
    n = args.max_n
    if n < 1 or n % 2 == 0:
        raise UsageError("--max-n must be an odd integer >= 1")
    route = args.method or "reversion"
    if route == "reversion":
        table = kaplan_coefficients_reversion(n)
    elif route == "lagrange":
        table = kaplan_coefficients_lagrange(n)
    else:
        raise UsageError("coeffs --method must be 'reversion' or 'lagrange'")
    fmt = args.format or "text"
    if fmt == "json":
        return table.to_json() + "\n", 0
    if fmt == "csv":
        return verify.render_csv(table.to_records(), ("n", "num", "den")), 0
    return table.to_text() + "\n", 0


def _verify(args) -> tuple[str, int]:
    ctx = _ctx(args)
    N = args.terms or DEFAULT_TERMS
    if args.suite == "pi-series":
        rows = verify.pi_series_rows(N, ctx)
        fields = ("k", "x", "N", "estimate", "reference", "gap", "tail_bound", "result")
        fmt = args.format or "csv"
        failed = any(r["result"] != verify.PASS for r in rows)
        if fmt == "json":
            return json.dumps(rows, indent=2) + "\n", int(failed)
        return verify.render_csv(rows, fields), int(failed)
    rows = verify.run_verification(ctx.decimal_digits, N, ctx.guard_digits)
    return verify.render(rows, args.format or "text"), int(verify.any_failed(rows))


def _convergence(args) -> tuple[str, int]:
    method = args.method or "kaplan"
    if method not in CONVERGENCE_METHODS:
        raise UsageError(f"unknown method {method!r}; choose from {', '.join(CONVERGENCE_METHODS)}")
    if args.counts:
        try:
            counts = [int(c) for c in args.counts.split(",") if c.strip()]
        except ValueError as exc:
            raise UsageError("--counts must be comma-separated integers") from exc
    elif args.terms:
        counts = list(range(1, args.terms + 1))
    else:
        counts = DEFAULT_COUNTS[method]
    ctx = _ctx(args)
    rows = [{"terms": n, "abs_error": to_decimal_string(e, 6)}
            for n, e in convergence_report(method, counts, ctx)]
    fmt = args.format or "text"
    if fmt == "json":
        return json.dumps({"method": method, "precision": ctx.decimal_digits, "rows": rows}) + "\n", 0
    if fmt == "csv":
        return verify.render_csv(rows, ("terms", "abs_error")), 0
    lines = [f"{'terms':>6}  abs_error"] + [f"{r['terms']:>6}  {r['abs_error']}" for r in rows]
    return "\n".join(lines) + "\n", 0


def _approx(args) -> tuple[str, int]:
    names = approx.APPROXIMANTS
    if args.method:
        if args.method not in names:
            raise UsageError(f"unknown approximant {args.method!r}; choose from {', '.join(names)}")
        names = (args.method,)
    ctx = _ctx(args)
    records = [approx.approximant(n, ctx).to_dict() for n in names]
    fmt = args.format or "json"
    if fmt == "csv":
        return verify.render_csv(records, ("name", "value", "precision", "correct_decimal_digits")), 0
    if fmt == "text":
        return "".join(f"{r['name']:<9} {r['value']}  ({r['correct_decimal_digits']} correct decimals)\n"
                       for r in records), 0
    return json.dumps(records, indent=2) + "\n", 0


def _engel(args) -> tuple[str, int]:
    ctx = _ctx(args)
    n = args.terms or 20
    d = dottie_newton(ctx)
    e = approx.engel_expansion(d, n, ctx)
    rec = e.reconstruction()
    mp = ctx.mp
    err = abs(d - mp.mpf(rec.numerator) / rec.denominator) if e.terms else d
    payload = {
        "terms": list(e.terms),
        "reconstruction_error": to_decimal_string(err, 6),
        "truncated": e.truncated,
        "precision": ctx.decimal_digits,
    }
    fmt = args.format or "json"
    if fmt == "text":
        return " ".join(map(str, e.terms)) + "\n", 0
    if fmt == "csv":
        return verify.render_csv([{"k": i, "a_k": a} for i, a in enumerate(e.terms, 1)], ("k", "a_k")), 0
    return json.dumps(payload) + "\n", 0


HANDLERS = {
    "compute": _compute,
    "coeffs": _coeffs,
    "verify": _verify,
    "convergence": _convergence,
    "approx": _approx,
    "engel": _engel,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text, code = HANDLERS[args.subcommand](args)
    except UsageError as exc:
        parser.print_usage(stderr)
        print(f"dottie: error: {exc}", file=stderr)
        return 2
    if args.out:
        Path(args.out).write_text(text)
    else:
        stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
