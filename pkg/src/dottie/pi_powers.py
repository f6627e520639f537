"""Powers of pi from partition sums over cotangent-derivative structure.

For non-integer ``x``

    pi^(k+2) = (-1)^k (k+1) / (2^k A_k(x)) * sum_{n in Z} (x - n)^(-(k+2))

with ``A_k(x)`` a sum over the partitions of ``k``.  The bilateral sum is
truncated at ``|n| <= N`` and carries an integral-test tail bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .precision import PrecisionContext
from .series import enumerate_partitions

__all__ = [
    "PoleError",
    "DegenerateSamplePoint",
    "PiPowerEstimate",
    "EulerCheck",
    "script_A",
    "bilateral_sum",
    "tail_bound",
    "pi_power_estimate",
    "euler_identity_check",
]


class PoleError(ValueError):
    """Raised at integer sample points, where the cosecant has a pole."""


class DegenerateSamplePoint(ValueError):
    """Raised where ``A_k(x)`` vanishes and the identity cannot be inverted."""


def _as_fraction(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("sample points must be exact rationals (int, str or Fraction)")
    return Fraction(x)


def _check_x(x: Fraction) -> None:
    if x.denominator == 1:
        raise PoleError(f"pole of cosecant at integer x={x}")


def _cos_shift_is_zero(x: Fraction, j: int) -> bool:
    # cos(2 pi x + j pi/2) = cos((pi/2)(4x + j)) vanishes iff 4x + j is an odd integer
    v = 4 * x + j
    return v.denominator == 1 and v.numerator % 2 == 1


def script_A(k: int, x, ctx: PrecisionContext):
    """The partition sum ``A_k(x)``; summed in lexicographic partition order."""
    if k < 1:
        raise ValueError("k must be >= 1")
    x = _as_fraction(x)
    _check_x(x)
    mp = ctx.mp
    xm = mp.mpf(x.numerator) / x.denominator
    sin2 = mp.sin(mp.pi * xm) ** 2
    cosines = {}
    for j in range(1, k + 1):
        cosines[j] = 0 if _cos_shift_is_zero(x, j) else mp.cos(2 * mp.pi * xm + j * mp.pi / 2)
    total = mp.zero
    for part in enumerate_partitions(k):
        S = part.size
        num = mp.mpf(factorial(S))
        den = mp.mpf(2) ** S * sin2 ** (S + 1)
        for j, m in part.items():
            num *= cosines[j] ** m
            den *= factorial(m) * factorial(j) ** m
        total += num / den
    return total


def tail_bound(k: int, x, N: int, ctx: PrecisionContext):
    """Bound on both omitted tails: ``2 / ((k+1) (N - |x| - 1)^(k+1))``."""
    mp = ctx.mp
    x = _as_fraction(x)
    gap = mp.mpf(N) - mp.mpf(abs(x).numerator) / abs(x).denominator - 1
    return 2 / ((k + 1) * gap ** (k + 1))


def bilateral_sum(k: int, x, N: int, ctx: PrecisionContext):
    """``sum_{n=-N}^{N} (x-n)^(-(k+2))`` and its certified tail bound.

    Mirrored pairs ``(n, -n)`` are added from the outside in, so the
    largest terms come last.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    x = _as_fraction(x)
    _check_x(x)
    if N < abs(x) + 2:
        raise ValueError(f"N={N} too small for |x|={abs(x)}; need N >= |x| + 2")
    mp = ctx.mp
    xm = mp.mpf(x.numerator) / x.denominator
    p = k + 2
    total = mp.zero
    for d in range(N, 0, -1):
        total += 1 / (xm - d) ** p + 1 / (xm + d) ** p
    total += 1 / xm**p
    return total, tail_bound(k, x, N, ctx)


@dataclass(frozen=True)
class PiPowerEstimate:
    k: int
    x: Fraction
    N: int
    estimate: object
    tail_bound: object
    ctx: PrecisionContext

    def __post_init__(self) -> None:
        if not self.tail_bound > 0:
            raise ValueError("tail_bound must be positive")

    @property
    def reference(self):
        return self.ctx.mp.pi ** (self.k + 2)

    @property
    def gap(self):
        return abs(self.estimate - self.reference)

    @property
    def within_bound(self) -> bool:
        return self.gap <= self.tail_bound


def pi_power_estimate(k: int, x, N: int, ctx: PrecisionContext) -> PiPowerEstimate:
    """Estimate ``pi^(k+2)`` from the truncated bilateral sum at sample point ``x``."""
    x = _as_fraction(x)
    A = script_A(k, x, ctx)
    if A == 0 or abs(A) < ctx.mp.mpf(10) ** (-ctx.decimal_digits):
        raise DegenerateSamplePoint(f"degenerate sample point: A_{k}({x}) = 0")
    mp = ctx.mp
    prefactor = (-1) ** k * (k + 1) / (mp.mpf(2) ** k * A)
    s, tail = bilateral_sum(k, x, N, ctx)
    return PiPowerEstimate(k, x, N, prefactor * s, abs(prefactor) * tail, ctx)


@dataclass(frozen=True)
class EulerCheck:
    kind: str
    x: Fraction
    N: int
    lhs: object
    rhs: object
    gap: object
    tail_bound: object

    @property
    def passed(self) -> bool:
        return self.gap <= self.tail_bound


def euler_identity_check(kind: str, x, N: int, ctx: PrecisionContext) -> EulerCheck:
    """Closed-form cotangent side against the truncated bilateral sum.

    ``cubic``:   pi^3 cot(pi x) csc^2(pi x) = sum (x-n)^-3
    ``quintic``: pi^5 cot(pi x) csc^2(pi x) (csc^2(pi x) - 1/3) = sum (x-n)^-5
    """
    x = _as_fraction(x)
    _check_x(x)
    mp = ctx.mp
    t = mp.pi * mp.mpf(x.numerator) / x.denominator
    # cot(pi x) is exactly zero at half-integers
    cot = mp.zero if x.denominator == 2 else mp.cot(t)
    csc2 = 1 / mp.sin(t) ** 2
    if kind == "cubic":
        k = 1
        lhs = mp.pi**3 * cot * csc2
    elif kind == "quintic":
        k = 3
        lhs = mp.pi**5 * cot * csc2 * (csc2 - mp.mpf(1) / 3)
    else:
        raise ValueError(f"unknown identity kind {kind!r}")
    rhs, tail = bilateral_sum(k, x, N, ctx)
    return EulerCheck(kind, x, N, lhs, rhs, abs(lhs - rhs), tail)
