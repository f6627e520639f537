import json
import math

import pytest

from dottie.mp_eval import (
    TableTooShort,
    convergence_report,
    cosine_error_ratios,
    dottie_cosine_iteration,
    dottie_newton,
    eval_kaplan_partial,
    kaplan_term,
    newton_iterations,
)
from dottie.precision import MethodResult, PrecisionContext, bracketed_newton
from dottie.series import kaplan_coefficients_reversion

D_32 = "0.73908513321516064165531208767387"


@pytest.fixture(scope="module")
def ctx32():
    return PrecisionContext(32)


def test_context_invariants():
    with pytest.raises(ValueError):
        PrecisionContext(9)
    with pytest.raises(ValueError):
        PrecisionContext(20, guard_digits=4)
    ctx = PrecisionContext(20)
    assert ctx.working_digits == 35
    assert ctx.mp.dps == 35
    assert ctx.doubled_guard().guard_digits == 30


def test_contexts_do_not_leak_precision():
    a, b = PrecisionContext(20), PrecisionContext(200)
    assert a.mp is not b.mp
    dottie_newton(b)
    assert a.mp.dps == 35


def test_newton_digits(ctx32):
    assert ctx32.to_str(dottie_newton(ctx32)) == D_32


def test_sin_and_tan_of_oracle():
    ctx = PrecisionContext(12)
    d = dottie_newton(ctx)
    assert ctx.to_str(ctx.mp.sin(d)) == "0.673612029183"
    assert ctx.to_str(ctx.mp.tan(d)) == "0.911413312094"


@pytest.mark.parametrize("P", [32, 64, 128, 256])
def test_oracle_residual(P):
    ctx = PrecisionContext(P)
    d = dottie_newton(ctx)
    assert abs(d - ctx.mp.cos(d)) < ctx.mp.mpf(10) ** (-P - 5)
    assert newton_iterations(ctx) <= 10 * math.log2(P) + 50


@pytest.mark.parametrize("P", [32, 64, 128])
def test_oracle_stable_under_precision_doubling(P):
    lo, hi = PrecisionContext(P), PrecisionContext(2 * P)
    a = lo.to_str(dottie_newton(lo))
    b = lo.to_str(dottie_newton(hi))
    # at most the final digit may differ
    assert a[:-1] == b[:-1]


def test_cosine_iteration_one_step(ctx32):
    r = dottie_cosine_iteration(ctx32, 1)
    assert ctx32.to_str(r.value, 10) == "0.5403023059"
    assert r.terms_or_iterations == 1
    with pytest.raises(ValueError):
        dottie_cosine_iteration(ctx32, 0)


def test_cosine_iteration_rate(ctx32):
    ratio = cosine_error_ratios(ctx32, 51)[50]
    assert abs(ratio - ctx32.mp.sin(dottie_newton(ctx32))) < 1e-4


def test_cosine_iteration_count_for_1e10(ctx32):
    errs = [dottie_cosine_iteration(ctx32, k).abs_error_vs_oracle for k in range(1, 70)]
    first = next(k for k, e in enumerate(errs, 1) if e < 1e-10)
    assert first == 55


def test_kaplan_partial_sums(ctx32):
    table = kaplan_coefficients_reversion(11)
    mp = ctx32.mp
    zero = eval_kaplan_partial(table, 0, ctx32)
    assert zero.value == mp.pi / 2
    assert abs(zero.abs_error_vs_oracle - mp.mpf("0.8317")) < 1e-4
    one = eval_kaplan_partial(table, 1, ctx32)
    assert ctx32.to_str(one.value, 10) == "0.7853981634"
    assert abs(one.abs_error_vs_oracle - mp.mpf("0.0463")) < 1e-4
    five = eval_kaplan_partial(table, 5, ctx32)
    six = eval_kaplan_partial(table, 6, ctx32)
    assert six.abs_error_vs_oracle < 1e-3
    assert six.abs_error_vs_oracle < five.abs_error_vs_oracle
    # independent numeric-inverse Taylor oracle gave these errors
    assert abs(five.abs_error_vs_oracle - mp.mpf("3.33372445342e-5")) < 1e-15
    assert abs(six.abs_error_vs_oracle - mp.mpf("6.70483810737e-6")) < 1e-15


def test_kaplan_table_too_short(ctx32):
    with pytest.raises(TableTooShort):
        eval_kaplan_partial(kaplan_coefficients_reversion(5), 4, ctx32)


def test_kaplan_term_ratio_below_half():
    ctx = PrecisionContext(30)
    table = kaplan_coefficients_reversion(33)
    for n in range(5, 32, 2):
        ratio = abs(kaplan_term(table[n + 2], n + 2, ctx)) / abs(kaplan_term(table[n], n, ctx))
        assert 0 < ratio < 0.5


def test_convergence_report_kaplan(ctx32):
    rows = convergence_report("kaplan", range(1, 9), ctx32)
    assert [n for n, _ in rows] == list(range(1, 9))
    errs = [e for _, e in rows]
    assert all(b < a for a, b in zip(errs, errs[1:]))


def test_convergence_report_cosine(ctx32):
    rows = convergence_report("cosine_iteration", [10, 20, 40], ctx32)
    errs = [e for _, e in rows]
    assert errs[0] > errs[1] > errs[2]
    rate = float(ctx32.mp.sin(dottie_newton(ctx32))) ** 10
    assert errs[1] / errs[0] == pytest.approx(rate, rel=0.05)


def test_convergence_report_edges(ctx32):
    assert convergence_report("kaplan", [], ctx32) == []
    with pytest.raises(ValueError):
        convergence_report("simpson", [1], ctx32)


def test_method_result_json_round_trip(ctx32):
    r = dottie_cosine_iteration(ctx32, 30)
    d = json.loads(r.to_json())
    assert set(d) == {"method", "value", "precision", "terms", "abs_error"}
    back = MethodResult.from_json(r.to_json())
    assert back.to_dict() == r.to_dict()


def test_method_result_rejects_negative_error(ctx32):
    with pytest.raises(ValueError):
        MethodResult("x", ctx32.mp.one, ctx32, 1, -ctx32.mp.one)


def test_bracketed_newton_survives_bad_derivative():
    ctx = PrecisionContext(30)
    mp = ctx.mp
    # derivative deliberately wrong: bisection safeguard still converges
    root = bracketed_newton(lambda x: x**3 - 2, lambda x: mp.one, 0, 2, ctx)
    assert abs(root - mp.cbrt(2)) < mp.mpf(10) ** -35
