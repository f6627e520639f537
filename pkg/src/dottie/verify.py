"""Cross-verification of every route against the Newton oracle.

Each check yields a :class:`Check` row.  Rows are sorted by method identifier
and check name so reports are byte-stable for fixed arguments.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass
from fractions import Fraction

from . import approx, connections, pi_powers
from .mp_eval import cosine_error_ratios, dottie_newton, eval_kaplan_partial, kaplan_term
from .precision import PrecisionContext, to_decimal_string
from .reference import (
    APPROXIMANT_DIGIT_CLAIMS,
    DOTTIE_32,
    KAPLAN_CORRECTED,
    KAPLAN_PUBLISHED,
    SIN_DOTTIE_12,
    TAN_DOTTIE_12,
)
from .series import kaplan_coefficients_lagrange, kaplan_coefficients_reversion

PASS, FAIL, NOTE = "PASS", "FAIL", "NOTE"

PI_SERIES_KS = (1, 2, 3, 4)
PI_SERIES_XS = (Fraction(1, 4), Fraction(1, 3), Fraction(2, 5))
BESSEL_N = 200
BESSEL_TOL = 1e-3
KAPLAN_N_MAX = 31
ROUTE_AGREEMENT_N = 15


@dataclass(frozen=True)
class Check:
    method: str
    check: str
    observed: str
    tolerance: str
    status: str

    @property
    def failed(self) -> bool:
        return self.status == FAIL


def _s(x, digits: int = 6) -> str:
    return to_decimal_string(x, digits)


def _status(ok: bool) -> str:
    return PASS if ok else FAIL


def _digits_prefix(x, reference: str, ctx: PrecisionContext) -> bool:
    n = min(len(reference) - 2, ctx.decimal_digits)
    return to_decimal_string(x, n) == reference[: n + 2]


def check_oracle(ctx: PrecisionContext) -> list[Check]:
    mp = ctx.mp
    d = dottie_newton(ctx)
    resid = abs(d - mp.cos(d))
    target = mp.mpf(10) ** (-ctx.decimal_digits - 5)
    return [
        Check("newton", "residual |x - cos x|", _s(resid), _s(target), _status(resid < target)),
        Check("newton", "published 32 digits", ctx.to_str(d, min(32, ctx.decimal_digits)),
              DOTTIE_32, _status(_digits_prefix(d, DOTTIE_32, ctx))),
        Check("newton", "sin D 12 digits", ctx.to_str(mp.sin(d), 12), SIN_DOTTIE_12,
              _status(ctx.to_str(mp.sin(d), 12) == SIN_DOTTIE_12)),
        Check("newton", "tan D 12 digits", ctx.to_str(mp.tan(d), 12), TAN_DOTTIE_12,
              _status(ctx.to_str(mp.tan(d), 12) == TAN_DOTTIE_12)),
    ]


def check_coefficients() -> list[Check]:
    rev = kaplan_coefficients_reversion(KAPLAN_N_MAX)
    lag = kaplan_coefficients_lagrange(ROUTE_AGREEMENT_N)
    rows = []
    for n, expected in KAPLAN_CORRECTED.items():
        for table in (rev, lag):
            got = table[n]
            rows.append(Check("coefficients", f"a_{n:02d} {table.route}", str(got),
                              str(expected), _status(got == expected)))
    mismatched = [n for n in lag.indices if lag[n] != rev[n]]
    rows.append(Check("coefficients", f"routes agree n<={ROUTE_AGREEMENT_N}",
                      "mismatch at " + ",".join(map(str, mismatched)) if mismatched else "exact",
                      "exact", _status(not mismatched)))
    printed = KAPLAN_PUBLISHED[9]
    rows.append(Check("coefficients", "a_09 as printed", str(printed), str(rev[9]),
                      NOTE if printed != rev[9] else PASS))
    return rows


def check_kaplan(ctx: PrecisionContext) -> list[Check]:
    table = kaplan_coefficients_reversion(KAPLAN_N_MAX + 2)
    n_terms = (KAPLAN_N_MAX + 1) // 2
    errors = [eval_kaplan_partial(table, i, ctx).abs_error_vs_oracle for i in range(n_terms + 1)]
    decreasing = all(b < a for a, b in zip(errors, errors[1:]))
    worst_ratio = max(
        abs(kaplan_term(table[n + 2], n + 2, ctx)) / abs(kaplan_term(table[n], n, ctx))
        for n in range(5, KAPLAN_N_MAX + 1, 2)
    )
    return [
        Check("kaplan", f"error through pi^{KAPLAN_N_MAX}", _s(errors[-1]), "1e-06",
              _status(errors[-1] < 1e-6)),
        Check("kaplan", "error strictly decreasing", str(decreasing), "True", _status(decreasing)),
        Check("kaplan", "max retained-term ratio 5<=n<=31", _s(worst_ratio), "0.5",
              _status(worst_ratio < 0.5)),
    ]


def check_cosine_iteration(ctx: PrecisionContext) -> list[Check]:
    mp = ctx.mp
    ratio = cosine_error_ratios(ctx, 51)[50]
    gap = abs(ratio - mp.sin(dottie_newton(ctx)))
    return [Check("cosine_iteration", "error ratio at k=50 vs sin D", _s(gap), "1e-04",
                  _status(gap < 1e-4))]


def pi_series_rows(N: int, ctx: PrecisionContext) -> list[dict]:
    rows = []
    for k in PI_SERIES_KS:
        for x in PI_SERIES_XS:
            est = pi_powers.pi_power_estimate(k, x, N, ctx)
            rows.append({
                "k": k,
                "x": str(x),
                "N": N,
                "estimate": ctx.to_str(est.estimate),
                "reference": ctx.to_str(est.reference),
                "gap": _s(est.gap),
                "tail_bound": _s(est.tail_bound),
                "result": _status(est.within_bound),
            })
    return rows


def check_pi_series(N: int, ctx: PrecisionContext) -> list[Check]:
    rows = [
        Check("pi_series", f"pi^{r['k'] + 2} at x={r['x']} N={N}", r["gap"], r["tail_bound"], r["result"])
        for r in pi_series_rows(N, ctx)
    ]
    for kind in ("cubic", "quintic"):
        e = pi_powers.euler_identity_check(kind, Fraction(1, 4), N, ctx)
        rows.append(Check("pi_series", f"euler {kind} x=1/4 N={N}", _s(e.gap), _s(e.tail_bound),
                          _status(e.passed)))
    return rows


def check_routes(ctx: PrecisionContext) -> list[Check]:
    d = dottie_newton(ctx)
    tol = ctx.tolerance
    routes = {
        "kepler": connections.dottie_via_kepler,
        "beta": connections.dottie_via_beta,
        "bertrand": connections.bertrand_angle,
    }
    rows = []
    for name, fn in routes.items():
        gap = abs(fn(ctx) - d)
        rows.append(Check(name, f"matches oracle at P={ctx.decimal_digits}", _s(gap), _s(tol),
                          _status(gap <= tol)))
    return rows


def check_bessel(ctx: PrecisionContext) -> list[Check]:
    res = connections.resolve_bessel_variant(BESSEL_N, ctx, BESSEL_TOL)
    rows = []
    for variant, r in res["results"].items():
        rows.append(Check("bessel", f"{variant} N={BESSEL_N} error", _s(r.abs_error_vs_oracle),
                          _s(BESSEL_TOL), NOTE))
    rows.append(Check("bessel", "exactly one variant converges",
                      res["winner"] or "none", "corrected",
                      _status(res["winner"] == "corrected")))
    return rows


def check_kapteyn(ctx: PrecisionContext) -> list[Check]:
    N = 10
    integral = connections.kapteyn_integral_partial(N, 512, ctx)
    series = connections.dottie_bessel_partial(N, "corrected", ctx).value
    gap = abs(integral - series)
    tol = ctx.mp.mpf(10) ** (-20)
    return [Check("kapteyn", f"integral equals Bessel partial sum N={N}", _s(gap), _s(tol),
                  _status(gap < tol))]


def check_approximants(ctx: PrecisionContext) -> list[Check]:
    rows = []
    for name, claim in APPROXIMANT_DIGIT_CLAIMS.items():
        a = approx.approximant(name, ctx)
        rows.append(Check("approx", f"{name} correct decimals", str(a.correct_decimal_digits),
                          str(claim), _status(a.correct_decimal_digits == claim)))
    return rows


def check_engel() -> list[Check]:
    lo, hi = PrecisionContext(200), PrecisionContext(400)
    e_lo = approx.engel_expansion(dottie_newton(lo), 20, lo)
    e_hi = approx.engel_expansion(dottie_newton(hi), 20, hi)
    d = dottie_newton(hi)
    mp = hi.mp
    rec = e_hi.reconstruction()
    err = abs(d - mp.mpf(rec.numerator) / rec.denominator)
    bound = e_hi.residual_bound()
    bound_mp = mp.mpf(bound.numerator) / bound.denominator
    stable = e_lo.terms == e_hi.terms and len(e_lo.terms) == 20 and not e_lo.truncated
    return [
        Check("engel", "20 terms identical at P=200 and P=400",
              ",".join(map(str, e_lo.terms)), "P=400 terms", _status(stable)),
        Check("engel", "reconstruction error below 1/(a_1...a_20)", _s(err), _s(bound_mp),
              _status(err < bound_mp)),
    ]


def run_verification(precision: int = 50, pi_terms: int = 1000,
                     guard_digits: int | None = None) -> list[Check]:
    ctx = PrecisionContext(precision) if guard_digits is None else PrecisionContext(precision, guard_digits)
    rows: list[Check] = []
    rows += check_oracle(ctx)
    coeff_rows = check_coefficients()
    rows += coeff_rows
    rows += check_kaplan(ctx)
    rows += check_cosine_iteration(ctx)
    pi_rows = check_pi_series(pi_terms, ctx)
    rows += pi_rows
    rows += check_routes(ctx)
    rows += check_bessel(ctx)
    rows += check_kapteyn(ctx)
    rows += check_approximants(ctx)
    rows += check_engel()
    # the boxed combined expansion is the product of the a_n and the pi^n identity,
    # so it holds exactly when both factor groups hold
    combined = not any(r.failed for r in coeff_rows + pi_rows)
    rows.append(Check("combined", "a_n exact AND pi^n identity", str(combined), "True",
                      _status(combined)))
    return sorted(rows, key=lambda r: (r.method, r.check))


def any_failed(rows) -> bool:
    return any(r.failed for r in rows)


FIELDS = ("method", "check", "observed", "tolerance", "status")


def render(rows: list[Check], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([asdict(r) for r in rows], indent=2) + "\n"
    if fmt == "csv":
        return render_csv([asdict(r) for r in rows], FIELDS)
    widths = [max(len(f), *(len(getattr(r, f)) for r in rows)) if rows else len(f) for f in FIELDS]
    lines = ["  ".join(f.ljust(w) for f, w in zip(FIELDS, widths)).rstrip()]
    for r in rows:
        lines.append("  ".join(getattr(r, f).ljust(w) for f, w in zip(FIELDS, widths)).rstrip())
    failed = sum(r.failed for r in rows)
    lines.append("")
    lines.append(f"{len(rows)} checks, {failed} failed")
    return "\n".join(lines) + "\n"


def render_csv(records: list[dict], fields) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(fields), lineterminator="\n")
    w.writeheader()
    w.writerows(records)
    return buf.getvalue()
