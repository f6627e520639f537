"""Exact formal power series and the Kaplan coefficients of the Dottie number.

Everything in this module is exact: coefficients are :class:`fractions.Fraction`
and no floating point is touched.  The Dottie number is expanded as

    D = pi/2 + sum_{n odd} a_n pi^n

where ``a_n = c_n * (-1/2)**n`` and ``c_n`` are the Taylor coefficients of the
inverse of ``u + sin u`` (the function ``x - cos x`` shifted to ``x = pi/2``).

Two independent routes produce the ``a_n``:

* reversion: ``c_n`` are solved order by order from ``s(t(v)) = v``;
* Lagrange: ``a_n = (n-1)!/(n! 2^n) [t^(n-1)] B(t)^(-n)`` with
  ``B(t) = cos(pi/2 + t)/t - 1 = -sin(t)/t - 1``, the reciprocal of ``B`` built
  from a Faa di Bruno partition sum.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Iterator, Sequence

__all__ = [
    "PartitionMultiIndex",
    "PowerSeries",
    "SymbolicPi",
    "CoefficientTable",
    "enumerate_partitions",
    "sine_series",
    "series_reciprocal_fdb",
    "series_reversion",
    "kaplan_coefficients_reversion",
    "kaplan_coefficient_lagrange",
    "kaplan_coefficients_lagrange",
    "derivative_table_f",
    "derivative_table_g",
    "b_coefficients",
]


class NonInvertibleSeries(ValueError):
    pass


class NonReversibleSeries(ValueError):
    pass


# ---------------------------------------------------------------------------
# partitions


@dataclass(frozen=True)
class PartitionMultiIndex:
    """Multiplicities ``m_1..m_k`` of an integer partition of ``k``.

    ``multiplicities[j-1]`` is the number of parts equal to ``j``.
    """

    multiplicities: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(m < 0 for m in self.multiplicities):
            raise ValueError("multiplicities must be non-negative")
        if sum(j * m for j, m in enumerate(self.multiplicities, 1)) != self.k:
            raise ValueError("multiplicities do not satisfy sum j*m_j = k")

    @property
    def k(self) -> int:
        return len(self.multiplicities)

    @property
    def size(self) -> int:
        """Number of parts, the ``S = sum m_j`` of the partition sums."""
        return sum(self.multiplicities)

    def items(self) -> Iterator[tuple[int, int]]:
        """Yield ``(j, m_j)`` for the non-zero multiplicities."""
        for j, m in enumerate(self.multiplicities, 1):
            if m:
                yield j, m

    def __repr__(self) -> str:
        body = ", ".join(f"m_{j}={m}" for j, m in self.items())
        return f"PartitionMultiIndex({{{body}}})"


@lru_cache(maxsize=None)
def _partitions(k: int) -> tuple[PartitionMultiIndex, ...]:
    out: list[tuple[int, ...]] = []
    m = [0] * k

    # fill m_j for j = 1..k in order; lexicographic in (m_1, m_2, ...)
    def rec(j: int, remaining: int) -> None:
        if j == k:
            if remaining % k == 0:
                m[k - 1] = remaining // k
                out.append(tuple(m))
            return
        for mj in range(remaining // j + 1):
            m[j - 1] = mj
            rec(j + 1, remaining - j * mj)
        m[j - 1] = 0

    if k == 0:
        return (PartitionMultiIndex(()),)
    rec(1, k)
    return tuple(PartitionMultiIndex(t) for t in out)


def enumerate_partitions(k: int) -> list[PartitionMultiIndex]:
    """All multiplicity vectors with ``sum_j j*m_j == k``, lexicographic in ``(m_1, m_2, ...)``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return list(_partitions(k))


# ---------------------------------------------------------------------------
# power series


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, float):
        raise TypeError("float coefficients are not allowed in exact series")
    return Fraction(c)


@dataclass(frozen=True)
class PowerSeries:
    """Truncated power series ``sum_{i<=order} c_i u^i`` with exact coefficients.

    Binary arithmetic truncates to the smaller of the two orders.
    """

    coefficients: tuple[Fraction, ...]

    def __init__(self, coefficients: Iterable, order: int | None = None):
        coeffs = [_frac(c) for c in coefficients]
        if order is not None:
            if order < 0:
                raise ValueError("order must be non-negative")
            coeffs = (coeffs + [Fraction(0)] * (order + 1))[: order + 1]
        if not coeffs:
            raise ValueError("a power series needs at least one coefficient")
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    @property
    def composable(self) -> bool:
        return self.coefficients[0] == 0

    def __getitem__(self, i: int) -> Fraction:
        if 0 <= i <= self.order:
            return self.coefficients[i]
        if i > self.order:
            raise IndexError(f"coefficient {i} beyond truncation order {self.order}")
        return self.coefficients[i]

    def __len__(self) -> int:
        return len(self.coefficients)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.coefficients)

    def truncate(self, order: int) -> PowerSeries:
        return PowerSeries(self.coefficients, order=order)

    @classmethod
    def one(cls, order: int) -> PowerSeries:
        return cls([1], order=order)

    @classmethod
    def identity(cls, order: int) -> PowerSeries:
        return cls([0, 1], order=order)

    def __add__(self, other) -> PowerSeries:
        if not isinstance(other, PowerSeries):
            other = PowerSeries([other], order=self.order)
        n = min(self.order, other.order)
        return PowerSeries([a + b for a, b in zip(self.coefficients[: n + 1], other.coefficients)])

    __radd__ = __add__

    def __neg__(self) -> PowerSeries:
        return PowerSeries([-c for c in self.coefficients])

    def __sub__(self, other) -> PowerSeries:
        return self + (-other if isinstance(other, PowerSeries) else -_frac(other))

    def __rsub__(self, other) -> PowerSeries:
        return (-self) + other

    def __mul__(self, other) -> PowerSeries:
        if not isinstance(other, PowerSeries):
            c = _frac(other)
            return PowerSeries([c * a for a in self.coefficients])
        n = min(self.order, other.order)
        return PowerSeries(_mul(self.coefficients, other.coefficients, n))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> PowerSeries:
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        result = PowerSeries.one(self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def compose(self, inner: PowerSeries, order: int | None = None) -> PowerSeries:
        """``self(inner(v))``; ``inner`` must have zero constant term."""
        if not inner.composable:
            raise ValueError("inner series must have zero constant term")
        n = min(self.order, inner.order) if order is None else order
        return PowerSeries(_compose(self.coefficients, inner.coefficients, n))

    def __call__(self, inner: PowerSeries) -> PowerSeries:
        return self.compose(inner)


def _mul(a: Sequence[Fraction], b: Sequence[Fraction], n: int) -> list[Fraction]:
    out = [Fraction(0)] * (n + 1)
    for i in range(min(n, len(a) - 1) + 1):
        ai = a[i]
        if not ai:
            continue
        for j in range(min(n - i, len(b) - 1) + 1):
            bj = b[j]
            if bj:
                out[i + j] += ai * bj
    return out


def _compose(outer: Sequence[Fraction], inner: Sequence[Fraction], n: int) -> list[Fraction]:
    # Horner: (((o_d) t + o_{d-1}) t + ...) t + o_0, truncated at n
    inner = list(inner[: n + 1])
    d = min(len(outer) - 1, n)
    acc = [Fraction(0)] * (n + 1)
    acc[0] = outer[d]
    for i in range(d - 1, -1, -1):
        acc = _mul(acc, inner, n)
        acc[0] += outer[i]
    return acc


def sine_series(order: int) -> PowerSeries:
    """Maclaurin series of ``sin u`` truncated at ``order``."""
    if order < 1:
        raise ValueError("order must be >= 1")
    coeffs = [Fraction(0)] * (order + 1)
    for i in range(1, order + 1, 2):
        coeffs[i] = Fraction((-1) ** (i // 2), factorial(i))
    return PowerSeries(coeffs)


def series_reciprocal_fdb(s: PowerSeries, order: int) -> PowerSeries:
    """Reciprocal ``1/s`` through ``order`` via the Faa di Bruno partition sum.

    For ``s = s_0 + s_1 u + ...`` the coefficient of ``u^k`` in ``1/s`` is

        sum over partitions {m_i} of k of
            (-1)^S S! / prod(m_i!) * prod(s_i^m_i) / s_0^(S+1),   S = sum m_i

    which is the derivative formula ``(1/h)^(k)`` divided by ``k!``.  No linear
    solve is involved.
    """
    s0 = s[0]
    if s0 == 0:
        raise NonInvertibleSeries("non-invertible series: zero constant term")
    if order > s.order:
        raise ValueError(f"order {order} exceeds the series truncation {s.order}")
    coeffs = [Fraction(1) / s0]
    inv_s0 = 1 / s0
    for k in range(1, order + 1):
        total = Fraction(0)
        for part in _partitions(k):
            term = Fraction(factorial(part.size))
            for i, m in part.items():
                si = s[i]
                if not si:
                    term = Fraction(0)
                    break
                term = term * si**m / factorial(m)
            if term:
                if part.size % 2:
                    term = -term
                total += term * inv_s0 ** (part.size + 1)
        coeffs.append(total)
    return PowerSeries(coeffs)


def series_reversion(s: PowerSeries, order: int | None = None) -> PowerSeries:
    """Compositional inverse ``t`` with ``s(t(v)) = v + O(v^(order+1))``.

    Coefficients are fixed one order at a time: with ``t`` known below ``v^k``,
    the ``v^k`` coefficient of ``s(t)`` is ``s_1 t_k + (known part)``.
    """
    if s[0] != 0 or s.order < 1 or s[1] == 0:
        raise NonReversibleSeries("non-reversible series: need s[0] = 0 and s[1] != 0")
    n = s.order if order is None else order
    if n > s.order:
        raise ValueError(f"order {n} exceeds the series truncation {s.order}")
    s1 = s[1]
    t = [Fraction(0), 1 / s1]
    for k in range(2, n + 1):
        t.append(Fraction(0))
        ck = _compose(s.coefficients, t, k)[k]
        t[k] = -ck / s1
    return PowerSeries(t[: n + 1], order=n)


# ---------------------------------------------------------------------------
# Kaplan coefficients


@dataclass(frozen=True)
class CoefficientTable:
    """Odd-indexed Kaplan coefficients ``a_n`` with the route that produced them."""

    entries: tuple[tuple[int, Fraction], ...]
    route: str

    def __post_init__(self) -> None:
        if self.route not in ("reversion", "lagrange"):
            raise ValueError(f"unknown route {self.route!r}")
        prev = 0
        for n, _ in self.entries:
            if n % 2 == 0 or n <= prev:
                raise ValueError("indices must be odd and strictly increasing")
            prev = n

    def __getitem__(self, n: int) -> Fraction:
        for idx, value in self.entries:
            if idx == n:
                return value
        raise KeyError(n)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def indices(self) -> list[int]:
        return [n for n, _ in self.entries]

    @property
    def values(self) -> list[Fraction]:
        return [v for _, v in self.entries]

    def to_records(self) -> list[dict]:
        return [
            {"n": n, "num": str(v.numerator), "den": str(v.denominator)}
            for n, v in self.entries
        ]

    def to_json(self) -> str:
        return json.dumps(self.to_records())

    @classmethod
    def from_records(cls, records: Iterable[dict], route: str = "reversion") -> CoefficientTable:
        return cls(
            tuple((int(r["n"]), Fraction(int(r["num"]), int(r["den"]))) for r in records),
            route,
        )

    @classmethod
    def from_json(cls, text: str, route: str = "reversion") -> CoefficientTable:
        return cls.from_records(json.loads(text), route)

    def to_text(self) -> str:
        rows = [(str(n), str(v.numerator), str(v.denominator)) for n, v in self.entries]
        w = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
             for i, h in enumerate(("n", "numerator", "denominator"))]
        lines = [f"{'n':>{w[0]}}  {'numerator':>{w[1]}}  {'denominator':>{w[2]}}"]
        lines.append("  ".join("-" * x for x in w))
        lines += [f"{a:>{w[0]}}  {b:>{w[1]}}  {c:>{w[2]}}" for a, b, c in rows]
        return "\n".join(lines)


def _shifted_f(order: int) -> PowerSeries:
    # x - cos x at x = pi/2 + u, minus pi/2
    return PowerSeries.identity(order) + sine_series(order)


@lru_cache(maxsize=8)
def _reversion_coefficients(order: int) -> PowerSeries:
    return series_reversion(_shifted_f(order))


def _check_odd(n: int, name: str) -> None:
    if not isinstance(n, int) or n < 1 or n % 2 == 0:
        raise ValueError(f"{name} must be an odd integer >= 1, got {n!r}")


def kaplan_coefficients_reversion(n_max: int) -> CoefficientTable:
    """``a_n`` for odd ``n <= n_max`` by reverting ``u + sin u``."""
    _check_odd(n_max, "n_max")
    c = _reversion_coefficients(n_max)
    even = [i for i in range(0, n_max + 1, 2) if c[i] != 0]
    if even:
        raise AssertionError(f"non-zero even reversion coefficients at {even}")
    entries = tuple((n, c[n] * Fraction(-1, 2) ** n) for n in range(1, n_max + 1, 2))
    return CoefficientTable(entries, "reversion")


def _bracket_series(order: int) -> PowerSeries:
    # cos(pi/2 + t)/t - 1 = -sin(t)/t - 1
    sin_over_t = [Fraction(0)] * (order + 1)
    for i in range(0, order + 1, 2):
        sin_over_t[i] = Fraction((-1) ** (i // 2), factorial(i + 1))
    return -PowerSeries(sin_over_t) - 1


def kaplan_coefficient_lagrange(n: int) -> Fraction:
    """``a_n`` from the Lagrange-inversion limit, by exact coefficient extraction.

    The ``(n-1)``-th derivative at ``t = 0`` of ``B(t)^(-n)`` is ``(n-1)!`` times
    its ``t^(n-1)`` coefficient, so no symbolic limit is needed.  Even ``n``
    gives exact zero.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if n % 2 == 0:
        return Fraction(0)
    m = n - 1
    recip = series_reciprocal_fdb(_bracket_series(m), m)
    coeff = (recip**n)[m]
    return Fraction(factorial(m), factorial(n) * 2**n) * coeff


def kaplan_coefficients_lagrange(n_max: int) -> CoefficientTable:
    _check_odd(n_max, "n_max")
    entries = tuple((n, kaplan_coefficient_lagrange(n)) for n in range(1, n_max + 1, 2))
    return CoefficientTable(entries, "lagrange")


def b_coefficients(table: CoefficientTable) -> list[Fraction]:
    """Coefficients ``b_k`` of ``D = sum_k b_k pi^(2k+1)``.

    ``b_0 = 1/2 + a_1`` absorbs the expansion point ``pi/2``; ``b_k = a_(2k+1)``.
    """
    out = []
    for n, a in table.entries:
        out.append(a + Fraction(1, 2) if n == 1 else a)
    return out


# ---------------------------------------------------------------------------
# derivative tables


@dataclass(frozen=True)
class SymbolicPi:
    """An exact rational multiple of pi, kept symbolic."""

    coefficient: Fraction

    def __str__(self) -> str:
        c = self.coefficient
        if c == 1:
            return "pi"
        if c.numerator == 1:
            return f"pi/{c.denominator}"
        if c.denominator == 1:
            return f"{c.numerator}*pi"
        return f"{c.numerator}*pi/{c.denominator}"


HALF_PI = SymbolicPi(Fraction(1, 2))


def derivative_table_f(n: int) -> SymbolicPi | int:
    """``f^(n)(pi/2)`` for ``f(x) = x - cos x``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return HALF_PI
    if n == 1:
        return 2
    # -cos^(n)(pi/2) = -cos(pi/2 + n pi/2); cycle over n mod 4
    return (0, 1, 0, -1)[n % 4]


def derivative_table_g(n_max: int) -> list[Fraction]:
    """``g^(n)(pi/2)`` for ``n = 1..n_max``, where ``g`` inverts ``x - cos x``."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    c = _reversion_coefficients(n_max if n_max % 2 else n_max + 1)
    return [factorial(n) * c[n] for n in range(1, n_max + 1)]
