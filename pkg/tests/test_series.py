from fractions import Fraction as F
from itertools import product
from math import factorial

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dottie.series import (
    CoefficientTable,
    PartitionMultiIndex,
    PowerSeries,
    SymbolicPi,
    b_coefficients,
    derivative_table_f,
    derivative_table_g,
    enumerate_partitions,
    kaplan_coefficient_lagrange,
    kaplan_coefficients_lagrange,
    kaplan_coefficients_reversion,
    series_reciprocal_fdb,
    series_reversion,
    sine_series,
)
from dottie.series import NonInvertibleSeries, NonReversibleSeries


# --- oracles ---------------------------------------------------------------


def brute_partitions(k):
    """Every m-vector with sum j*m_j = k, by exhaustive product."""
    if k == 0:
        return [()]
    ranges = [range(k // j + 1) for j in range(1, k + 1)]
    return [m for m in product(*ranges) if sum(j * mj for j, mj in enumerate(m, 1)) == k]


def partition_count(n, largest=None):
    largest = n if largest is None else largest
    if n == 0:
        return 1
    return sum(partition_count(n - p, p) for p in range(1, min(n, largest) + 1))


def reciprocal_by_linear_solve(s, order):
    # triangular system sum_{i<=k} s_i r_{k-i} = delta_k0
    r = []
    for k in range(order + 1):
        acc = F(1 if k == 0 else 0) - sum(s[i] * r[k - i] for i in range(1, k + 1))
        r.append(acc / s[0])
    return r


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=7)


# --- partitions ------------------------------------------------------------


def test_partitions_of_zero():
    parts = enumerate_partitions(0)
    assert len(parts) == 1
    assert parts[0].multiplicities == ()


def test_partitions_of_three():
    parts = [p.multiplicities for p in enumerate_partitions(3)]
    assert sorted(parts) == sorted([(0, 0, 1), (1, 1, 0), (3, 0, 0)])
    assert parts == sorted(parts)  # lexicographic in (m_1, m_2, ...)


def test_partitions_of_seven_match_brute_force():
    parts = enumerate_partitions(7)
    assert len(parts) == 15
    assert sorted(p.multiplicities for p in parts) == sorted(brute_partitions(7))


@pytest.mark.parametrize("k", range(21))
def test_partition_count(k):
    parts = enumerate_partitions(k)
    assert len(parts) == partition_count(k)
    assert len({p.multiplicities for p in parts}) == len(parts)
    for p in parts:
        assert sum(j * m for j, m in p.items()) == k
        if k:
            assert 1 <= p.size <= k


def test_partition_rejects_bad_weight():
    with pytest.raises(ValueError):
        PartitionMultiIndex((1, 1))
    with pytest.raises(ValueError):
        enumerate_partitions(-1)


# --- power series ----------------------------------------------------------


def test_sine_series():
    assert list(sine_series(3)) == [0, 1, 0, F(-1, 6)]
    assert sine_series(5)[5] == F(1, 120)
    with pytest.raises(ValueError):
        sine_series(0)


def test_series_arithmetic_truncates_to_min_order():
    a = PowerSeries([1, 2, 3])
    b = PowerSeries([1, 1])
    assert (a * b).order == 1
    assert list(a + b) == [2, 3]
    assert list(a * 2) == [2, 4, 6]
    assert PowerSeries([0, 1]).composable
    assert not a.composable


def test_series_rejects_floats():
    with pytest.raises(TypeError):
        PowerSeries([0.5])


def test_power_matches_repeated_product():
    s = PowerSeries([F(1, 2), 3, F(-1, 5), 7], order=3)
    assert s**3 == s * s * s
    assert s**0 == PowerSeries.one(3)


def test_reciprocal_geometric():
    assert list(series_reciprocal_fdb(PowerSeries([1, 1], order=3), 3)) == [1, -1, 1, -1]


def test_reciprocal_constant():
    assert list(series_reciprocal_fdb(PowerSeries([2], order=2), 2)) == [F(1, 2), 0, 0]


def test_reciprocal_of_shifted_cosine_bracket():
    s = PowerSeries([-2, 0, F(1, 6), 0, F(-1, 120)])
    r = series_reciprocal_fdb(s, 4)
    assert list(r) == reciprocal_by_linear_solve(s, 4)
    assert r[0] == F(-1, 2)
    assert r[2] == F(-1, 24)


def test_reciprocal_needs_constant_term():
    with pytest.raises(NonInvertibleSeries):
        series_reciprocal_fdb(PowerSeries([0, 1]), 1)


@settings(max_examples=40, deadline=None)
@given(st.lists(rationals, min_size=1, max_size=9).filter(lambda c: c[0] != 0))
def test_reciprocal_soundness(coeffs):
    s = PowerSeries(coeffs)
    r = series_reciprocal_fdb(s, s.order)
    assert s * r == PowerSeries.one(s.order)
    assert list(r) == reciprocal_by_linear_solve(s, s.order)


def test_reversion_linear():
    assert list(series_reversion(PowerSeries([0, 2]))) == [0, F(1, 2)]


def test_reversion_of_u_plus_sin_u():
    t = series_reversion(PowerSeries.identity(3) + sine_series(3))
    # hand substitution u = v/2 + c3 v^3 into v = 2u - u^3/6
    assert t[3] == F(1, 96)
    assert t[3] * F(-1, 2) ** 3 == F(-1, 768)


def test_reversion_of_u_plus_u_squared():
    s = PowerSeries([0, 1, 1], order=3)
    t = series_reversion(s)
    assert list(t) == [0, 1, -1, 2]
    assert s.compose(t) == PowerSeries.identity(3)


def test_reversion_errors():
    with pytest.raises(NonReversibleSeries):
        series_reversion(PowerSeries([1, 1]))
    with pytest.raises(NonReversibleSeries):
        series_reversion(PowerSeries([0, 0, 1]))


@settings(max_examples=30, deadline=None)
@given(rationals.filter(lambda c: c != 0), st.lists(rationals, min_size=0, max_size=7))
def test_reversion_soundness(lead, rest):
    s = PowerSeries([0, lead, *rest])
    t = series_reversion(s)
    assert s.compose(t) == PowerSeries.identity(s.order)


# --- Kaplan coefficients ---------------------------------------------------

# published values, with the misprinted a_9 replaced by the verified 223
EQ12 = {
    1: F(-1, 4),
    3: F(-1, 768),
    5: F(-1, 61440),
    7: F(-43, 165150720),
    9: F(-223, 47563407360),
    11: F(-60623, 669692775628800),
}


def test_reversion_route_first_coefficients():
    table = kaplan_coefficients_reversion(11)
    assert dict(table.entries) == EQ12
    assert table.route == "reversion"


@pytest.mark.parametrize("n", [1, 3, 9])
def test_lagrange_route(n):
    assert kaplan_coefficient_lagrange(n) == EQ12[n]


def test_lagrange_even_index_is_zero():
    assert kaplan_coefficient_lagrange(4) == 0


def test_routes_agree_through_15():
    rev = kaplan_coefficients_reversion(15)
    lag = kaplan_coefficients_lagrange(15)
    assert rev.entries == lag.entries


def test_a9_against_numerical_derivative():
    # independent of both exact routes: 9th Taylor coefficient of the numeric inverse
    mp = mpmath.MPContext()
    mp.dps = 40
    inv = lambda y: mp.findroot(lambda u: u + mp.sin(u) - y, y / 2)
    c9 = mp.diff(inv, 0, 9) / mp.factorial(9)
    a9 = kaplan_coefficients_reversion(9)[9]
    assert abs(c9 * mp.mpf(-0.5) ** 9 - mp.mpf(a9.numerator) / a9.denominator) < mp.mpf(10) ** -25


def test_even_reversion_coefficients_vanish():
    t = series_reversion(PowerSeries.identity(21) + sine_series(21))
    assert all(t[i] == 0 for i in range(0, 22, 2))


def test_coefficient_table_validation():
    with pytest.raises(ValueError):
        CoefficientTable(((2, F(1)),), "reversion")
    with pytest.raises(ValueError):
        CoefficientTable(((3, F(1)), (1, F(1))), "reversion")
    with pytest.raises(ValueError):
        CoefficientTable((), "nope")
    with pytest.raises(ValueError):
        kaplan_coefficients_reversion(4)


def test_coefficient_table_json_round_trip():
    table = kaplan_coefficients_reversion(11)
    records = table.to_records()
    assert records[-1] == {"n": 11, "num": "-60623", "den": "669692775628800"}
    assert CoefficientTable.from_json(table.to_json()) == table
    text = table.to_text()
    assert "669692775628800" in text.splitlines()[-1]


def test_b_coefficients():
    b = b_coefficients(kaplan_coefficients_reversion(5))
    assert b == [F(1, 4), F(-1, 768), F(-1, 61440)]


# --- derivative tables -----------------------------------------------------


@pytest.mark.parametrize("n, expected", [(1, 2), (2, 0), (3, -1), (4, 0), (5, 1), (6, 0), (7, -1), (9, 1)])
def test_derivative_table_f(n, expected):
    assert derivative_table_f(n) == expected


def test_derivative_table_f_zero_is_symbolic():
    v = derivative_table_f(0)
    assert v == SymbolicPi(F(1, 2))
    assert str(v) == "pi/2"


def test_derivative_table_g():
    g = derivative_table_g(3)
    assert g == [F(1, 2), 0, F(1, 16)]
    # first derivative from the inverse function theorem
    assert g[0] == 1 / F(derivative_table_f(1))


def test_taylor_reconstruction_converges_to_oracle():
    mp = mpmath.MPContext()
    mp.dps = 50
    d = mp.findroot(lambda x: x - mp.cos(x), 0.75)
    g = derivative_table_g(41)
    total = mp.pi / 2
    errs = []
    for n, gn in enumerate(g, 1):
        total += mp.mpf(gn.numerator) / gn.denominator * (-mp.pi) ** n / (2**n * factorial(n))
        errs.append(abs(total - d))
    assert errs[-1] < 1e-14
    assert errs[-1] < errs[10] < errs[0]
