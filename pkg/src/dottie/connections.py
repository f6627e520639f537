"""Special-function routes to the Dottie number.

* Kepler: with ``e = 1`` and ``M = pi/2`` the eccentric anomaly satisfies
  ``sin E = D``.
* Bessel/Kapteyn: the Kepler solution expanded in ``J_n(n e)``.
* Incomplete beta: ``D = sqrt(1 - (2 x* - 1)^2)`` where ``I_{x*}(1/2, 3/2) = 1/2``.
* Bertrand: the chord through a semicircle's endpoint that halves its area.
"""

from __future__ import annotations

import math
from functools import lru_cache

from .mp_eval import dottie_newton
from .precision import MethodResult, PrecisionContext, bracketed_newton

__all__ = [
    "BESSEL_VARIANTS",
    "BESSEL_Z_CAP",
    "bessel_j",
    "bessel_j_integral",
    "kepler_solve",
    "dottie_via_kepler",
    "dottie_bessel_partial",
    "resolve_bessel_variant",
    "gauss_legendre",
    "kapteyn_integral_partial",
    "reg_incomplete_beta",
    "inverse_reg_incomplete_beta",
    "beta_midpoint",
    "dottie_via_beta",
    "chord_area",
    "bertrand_angle",
]

BESSEL_Z_CAP = 10**4
BESSEL_VARIANTS = ("as_printed", "corrected")


# ---------------------------------------------------------------------------
# Bessel J_n


def _series_magnitude_digits(order: int, z: float) -> int:
    """log10 of the largest term of the ascending series of ``J_order(z)``."""
    if z == 0:
        return 0
    h = math.log(abs(z) / 2)
    best = -math.inf
    m = 0
    while True:
        lt = (order + 2 * m) * h - math.lgamma(m + 1) - math.lgamma(order + m + 1)
        best = max(best, lt)
        if m > abs(z) and lt < best - 5:
            break
        m += 1
    return max(0, math.ceil(best / math.log(10)))


def bessel_j(order: int, z, ctx: PrecisionContext):
    """``J_order(z)`` from the ascending series.

    Terms alternate and can grow to ``~ I_order(|z|)`` before decaying, so the
    sum runs with extra digits to absorb that cancellation.
    """
    if order < 0 or int(order) != order:
        raise ValueError("order must be a non-negative integer")
    if abs(z) > BESSEL_Z_CAP:
        raise ValueError(f"|z| > {BESSEL_Z_CAP}: asymptotic range not supported")
    order = int(order)
    mp_out = ctx.mp
    lost = _series_magnitude_digits(order, float(abs(z)))
    mp = ctx.extra(lost + 5).mp
    z = mp.mpf(z)
    if z == 0:
        return mp_out.mpf(1 if order == 0 else 0)
    half = z / 2
    q = -half * half
    term = half**order / mp.factorial(order)
    total = term
    eps = mp.mpf(10) ** (-ctx.working_digits)
    m = 0
    while True:
        m += 1
        term = term * q / (m * (order + m))
        total += term
        if m > abs(half) and abs(term) < eps * max(abs(total), eps):
            break
    return mp_out.mpf(total)


def bessel_j_integral(order: int, z, ctx: PrecisionContext):
    """``J_order(z) = (1/pi) int_0^pi cos(n t - z sin t) dt`` by tanh-sinh quadrature."""
    mp = ctx.mp
    z = mp.mpf(z)
    n = int(order)
    # split [0, pi] so each piece holds a bounded number of oscillations
    pieces = max(1, (n + int(abs(z))) // 4)
    nodes = mp.linspace(0, mp.pi, pieces + 1)
    val = mp.quad(lambda t: mp.cos(n * t - z * mp.sin(t)), nodes)
    return val / mp.pi


# ---------------------------------------------------------------------------
# Kepler


def kepler_solve(e, M, ctx: PrecisionContext):
    """Eccentric anomaly ``E`` with ``E - e sin E = M``, ``0 <= e <= 1``.

    Newton from ``E0 = M + e*sign(sin M)``, safeguarded by the bracket
    ``[M - e, M + e]`` which always contains the root.
    """
    mp = ctx.mp
    e, M = mp.mpf(e), mp.mpf(M)
    if not 0 <= e <= 1:
        raise ValueError("eccentricity must lie in [0, 1]")
    if e == 0:
        return M
    f = lambda E: E - e * mp.sin(E) - M
    df = lambda E: 1 - e * mp.cos(E)
    x0 = M + e * mp.sign(mp.sin(M))
    E = bracketed_newton(f, df, M - e, M + e, ctx, x0=x0)
    target = mp.mpf(10) ** (-ctx.decimal_digits - 5)
    if abs(f(E)) >= target:
        # near-singular derivative (e ~ 1, M ~ 0): refine by plain bisection
        lo, hi = M - e, M + e
        for _ in range(4 * ctx.working_digits + 40):
            mid = (lo + hi) / 2
            if f(mid) > 0:
                hi = mid
            else:
                lo = mid
        E = (lo + hi) / 2
    return E


def dottie_via_kepler(ctx: PrecisionContext):
    """``sin E`` for the parabolic quarter-period case ``E - sin E = pi/2``."""
    mp = ctx.mp
    E = kepler_solve(1, mp.pi / 2, ctx)
    return mp.sin(E)


def dottie_bessel_partial(N: int, variant: str, ctx: PrecisionContext) -> MethodResult:
    """``2 sum_{n<N} [J_{4n+1}(4n+1)/(4n+1) - J_o(4n+3)/(4n+3)]``.

    ``o = 4n+1`` for ``as_printed`` and ``o = 4n+3`` for ``corrected``.
    """
    if variant not in BESSEL_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if N < 0:
        raise ValueError("N must be non-negative")
    mp = ctx.mp
    total = mp.zero
    for n in range(N):
        p, q = 4 * n + 1, 4 * n + 3
        second = p if variant == "as_printed" else q
        total += bessel_j(p, p, ctx) / p - bessel_j(second, q, ctx) / q
    total *= 2
    res = MethodResult("bessel", total, ctx, N, abs(total - dottie_newton(ctx)))
    res.meta["variant"] = variant
    return res


def resolve_bessel_variant(N: int, ctx: PrecisionContext, tol=1e-3) -> dict:
    """Run both variants at ``N`` and report which ones land within ``tol`` of D."""
    results = {v: dottie_bessel_partial(N, v, ctx) for v in BESSEL_VARIANTS}
    converging = [v for v, r in results.items() if r.abs_error_vs_oracle < tol]
    return {
        "results": results,
        "converging": converging,
        "winner": converging[0] if len(converging) == 1 else None,
    }


# ---------------------------------------------------------------------------
# Kapteyn integral


@lru_cache(maxsize=32)
def _gl_nodes(n: int, dps: int):
    from .precision import _mp_context

    mp = _mp_context(dps)
    nodes, weights = [], []
    for i in range(1, n + 1):
        x = mp.cos(mp.pi * (i - mp.mpf(1) / 4) / (n + mp.mpf(1) / 2))
        for _ in range(100):
            p0, p1 = mp.one, x
            for k in range(2, n + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            dp = n * (x * p1 - p0) / (x * x - 1)
            dx = p1 / dp
            x -= dx
            if abs(dx) < mp.mpf(10) ** (-dps + 3):
                break
        p0, p1 = mp.one, x
        for k in range(2, n + 1):
            p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
        dp = n * (x * p1 - p0) / (x * x - 1)
        nodes.append(x)
        weights.append(2 / ((1 - x * x) * dp * dp))
    return tuple(nodes), tuple(weights)


def gauss_legendre(n: int, ctx: PrecisionContext):
    """Nodes and weights of the ``n``-point Gauss-Legendre rule on ``[-1, 1]``."""
    return _gl_nodes(n, ctx.working_digits)


def _kapteyn_integrand(u, N: int, mp):
    # sum over n<N of sin(p u) sin(p s)/p, sign +1 for p = 4n+1 and -1 for p = 4n+3,
    # with sin(p u), sin(p s) generated by the Chebyshev recurrence
    s = mp.sin(u)
    cu2, cs2 = 2 * mp.cos(u), 2 * mp.cos(s)
    su_prev, su = mp.zero, mp.sin(u)
    ss_prev, ss = mp.zero, mp.sin(s)
    total = mp.zero
    top = 4 * (N - 1) + 3
    for p in range(1, top + 1, 2):
        if p % 4 == 1:
            total += su * ss / p
        else:
            total -= su * ss / p
        # advance two steps: sin((p+2)a) = 2cos(a) sin((p+1)a) - sin(p a)
        su_prev, su = su, cu2 * su - su_prev
        su_prev, su = su, cu2 * su - su_prev
        ss_prev, ss = ss, cs2 * ss - ss_prev
        ss_prev, ss = ss, cs2 * ss - ss_prev
    return total


def kapteyn_integral_partial(
    N: int, quadrature_points: int, ctx: PrecisionContext, rule_order: int = 16
):
    """``(2/pi) int_0^pi`` of the ``N``-term truncated Kapteyn integrand.

    Composite Gauss-Legendre: ``quadrature_points // rule_order`` equal panels of
    a ``rule_order``-point rule.  Converges slowly in ``N``.
    """
    if N < 0:
        raise ValueError("N must be non-negative")
    if quadrature_points < 64:
        raise ValueError("quadrature_points must be >= 64")
    mp = ctx.mp
    if N == 0:
        return mp.zero
    nodes, weights = gauss_legendre(rule_order, ctx)
    panels = max(1, quadrature_points // rule_order)
    h = mp.pi / panels
    total = mp.zero
    for i in range(panels):
        mid = (i + mp.mpf(1) / 2) * h
        acc = mp.zero
        for x, w in zip(nodes, weights):
            acc += w * _kapteyn_integrand(mid + x * h / 2, N, mp)
        total += acc * h / 2
    return 2 * total / mp.pi


# ---------------------------------------------------------------------------
# incomplete beta


def _check_beta_params(a, b) -> None:
    if not (a > 0 and b > 0):
        raise ValueError("a and b must be positive")


def _beta_theta_integral(theta, a, b, mp):
    # t = sin^2(th): t^(a-1) (1-t)^(b-1) dt = 2 sin^(2a-1) cos^(2b-1) dth
    if theta == 0:
        return mp.zero
    f = lambda th: 2 * mp.sin(th) ** (2 * a - 1) * mp.cos(th) ** (2 * b - 1)
    return mp.quad(f, [0, theta])


def reg_incomplete_beta(x, a, b, ctx: PrecisionContext):
    """``I_x(a, b)`` by tanh-sinh quadrature after ``t = sin^2(theta)``."""
    mp = ctx.mp
    x, a, b = mp.mpf(x), mp.mpf(a), mp.mpf(b)
    _check_beta_params(a, b)
    if not 0 <= x <= 1:
        raise ValueError("x must lie in [0, 1]")
    if x == 0:
        return mp.zero
    if x == 1:
        return mp.one
    full = _beta_theta_integral(mp.pi / 2, a, b, mp)
    part = _beta_theta_integral(mp.asin(mp.sqrt(x)), a, b, mp)
    return part / full


def inverse_reg_incomplete_beta(p, a, b, ctx: PrecisionContext):
    """``x`` in ``[0, 1]`` with ``I_x(a, b) = p`` by bracketed Newton."""
    mp = ctx.mp
    p, a, b = mp.mpf(p), mp.mpf(a), mp.mpf(b)
    _check_beta_params(a, b)
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    if p == 0:
        return mp.zero
    if p == 1:
        return mp.one
    full = _beta_theta_integral(mp.pi / 2, a, b, mp)
    # solve in theta, where the integrand is smooth: x = sin^2(theta)
    g = lambda th: _beta_theta_integral(th, a, b, mp) / full - p
    dg = lambda th: 2 * mp.sin(th) ** (2 * a - 1) * mp.cos(th) ** (2 * b - 1) / full
    theta = bracketed_newton(g, dg, 0, mp.pi / 2, ctx, x0=mp.asin(mp.sqrt(p)))
    return mp.sin(theta) ** 2


def beta_midpoint(ctx: PrecisionContext):
    """``x*`` with ``I_{x*}(1/2, 3/2) = 1/2``."""
    mp = ctx.mp
    return inverse_reg_incomplete_beta(mp.mpf(1) / 2, mp.mpf(1) / 2, mp.mpf(3) / 2, ctx)


def dottie_via_beta(ctx: PrecisionContext):
    mp = ctx.mp
    xs = beta_midpoint(ctx)
    return mp.sqrt(1 - (2 * xs - 1) ** 2)


# ---------------------------------------------------------------------------
# Bertrand semicircle


def chord_area(theta, ctx: PrecisionContext, R=1):
    """Area cut from a disc of radius ``R`` by a chord subtending ``theta``."""
    mp = ctx.mp
    theta = mp.mpf(theta)
    return mp.mpf(R) ** 2 / 2 * (theta - mp.sin(theta))


def bertrand_angle(ctx: PrecisionContext):
    """Angle ``phi`` whose chord halves a unit semicircle; ``theta = pi/2 + phi``."""
    mp = ctx.mp
    target = mp.pi / 4
    f = lambda th: chord_area(th, ctx) - target
    df = lambda th: (1 - mp.cos(th)) / 2
    theta = bracketed_newton(f, df, mp.pi / 2, mp.pi, ctx)
    return theta - mp.pi / 2
