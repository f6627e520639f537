"""Arbitrary-precision evaluation: Newton oracle, cosine iteration, Kaplan partial sums."""

from __future__ import annotations

import math
from functools import lru_cache

from .precision import MethodResult, PrecisionContext
from .series import CoefficientTable, kaplan_coefficients_reversion

__all__ = [
    "OracleError",
    "TableTooShort",
    "dottie_newton",
    "newton_iterations",
    "dottie_cosine_iteration",
    "cosine_error_ratios",
    "eval_kaplan_partial",
    "kaplan_term",
    "convergence_report",
    "CONVERGENCE_METHODS",
]


class OracleError(RuntimeError):
    pass


class TableTooShort(ValueError):
    pass


def _newton(ctx: PrecisionContext):
    mp = ctx.mp
    P = ctx.decimal_digits
    target = mp.mpf(10) ** (-P - 5)
    step_tol = mp.mpf(10) ** (-ctx.working_digits + 2)
    cap = int(10 * math.log2(P)) + 50
    x = mp.mpf(3) / 4
    for it in range(1, cap + 1):
        c, s = mp.cos(x), mp.sin(x)
        dx = (x - c) / (1 + s)
        x -= dx
        if abs(dx) < step_tol and abs(x - mp.cos(x)) < target:
            return x, it
    raise OracleError(f"Newton did not converge within {cap} iterations at P={P}")


@lru_cache(maxsize=64)
def _oracle(ctx: PrecisionContext):
    try:
        return _newton(ctx)
    except OracleError:
        # stability self-check failed: retry with doubled guard digits
        x, it = _newton(ctx.doubled_guard())
        return ctx.mp.mpf(x), it


def dottie_newton(ctx: PrecisionContext):
    """Dottie number at ``ctx`` precision; ``|x - cos x| < 10**(-P-5)``.

    Newton on ``x - cos x`` from ``x0 = 3/4``.
    """
    return _oracle(ctx)[0]


def newton_iterations(ctx: PrecisionContext) -> int:
    return _oracle(ctx)[1]


def dottie_cosine_iteration(ctx: PrecisionContext, max_iter: int, x0=1) -> MethodResult:
    """Iterate ``x <- cos x`` ``max_iter`` times from ``x0``.

    Convergence is linear with rate ``sin D ~ 0.6736``, so small ``max_iter``
    leaves a large error; the error is reported, not hidden.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    mp = ctx.mp
    x = mp.mpf(x0)
    for _ in range(max_iter):
        x = mp.cos(x)
    return MethodResult(
        "cosine_iteration", x, ctx, max_iter, abs(x - dottie_newton(ctx))
    )


def cosine_error_ratios(ctx: PrecisionContext, n: int, x0=1) -> list:
    """``|x_{k+1} - D| / |x_k - D|`` for ``k = 0..n-1``."""
    mp = ctx.mp
    d = dottie_newton(ctx)
    x = mp.mpf(x0)
    ratios = []
    for _ in range(n):
        nx = mp.cos(x)
        ratios.append(abs(nx - d) / abs(x - d))
        x = nx
    return ratios


def kaplan_term(a, n: int, ctx: PrecisionContext):
    mp = ctx.mp
    return mp.mpf(a.numerator) / a.denominator * mp.pi**n


def eval_kaplan_partial(
    coeffs: CoefficientTable, n_terms: int, ctx: PrecisionContext
) -> MethodResult:
    """``pi/2 + sum a_n pi^n`` over the first ``n_terms`` odd indices."""
    if n_terms < 0:
        raise ValueError("n_terms must be non-negative")
    wanted = [2 * i + 1 for i in range(n_terms)]
    have = set(coeffs.indices)
    missing = [n for n in wanted if n not in have]
    if missing:
        raise TableTooShort(
            f"table too short: need a_n for n up to {wanted[-1]}, missing {missing[:3]}"
        )
    mp = ctx.mp
    total = mp.pi / 2
    for n in wanted:
        total += kaplan_term(coeffs[n], n, ctx)
    return MethodResult("kaplan", total, ctx, n_terms, abs(total - dottie_newton(ctx)))


CONVERGENCE_METHODS = ("kaplan", "bessel_series", "cosine_iteration")


def convergence_report(method: str, term_counts, ctx: PrecisionContext) -> list[tuple[int, object]]:
    """Rows ``(terms, abs_error)`` for one method at each requested term count."""
    if method not in CONVERGENCE_METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {CONVERGENCE_METHODS}")
    counts = list(term_counts)
    if not counts:
        return []
    rows = []
    if method == "kaplan":
        table = kaplan_coefficients_reversion(2 * max(counts) - 1 if max(counts) else 1)
        for n in counts:
            rows.append((n, eval_kaplan_partial(table, n, ctx).abs_error_vs_oracle))
    elif method == "cosine_iteration":
        for n in counts:
            rows.append((n, dottie_cosine_iteration(ctx, n).abs_error_vs_oracle))
    else:
        from .connections import dottie_bessel_partial

        for n in counts:
            rows.append((n, dottie_bessel_partial(n, "corrected", ctx).abs_error_vs_oracle))
    return rows
