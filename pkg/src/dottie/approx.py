"""Closed-form approximants of the Dottie number and its Engel expansion."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .mp_eval import dottie_newton
from .precision import PrecisionContext, bracketed_newton

__all__ = [
    "APPROXIMANTS",
    "Approximant",
    "approximant",
    "correct_decimal_digits",
    "gamma_minimum",
    "inverse_gamma",
    "EngelExpansion",
    "engel_expansion",
]

APPROXIMANTS = ("tangent", "broukhis", "hammond")


class BelowGammaMinimum(ValueError):
    pass


@dataclass(frozen=True)
class Approximant:
    name: str
    value: object
    correct_decimal_digits: int
    ctx: PrecisionContext

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "value": self.ctx.to_str(self.value),
            "precision": self.ctx.decimal_digits,
            "correct_decimal_digits": self.correct_decimal_digits,
        }


def _fixed_digits(x, ndigits: int, mp) -> tuple[int, str]:
    # truncate |x| to ndigits decimals: (integer part, fractional digit string)
    scaled = int(mp.floor(abs(x) * mp.mpf(10) ** ndigits))
    ip, frac = divmod(scaled, 10**ndigits)
    return ip, str(frac).rjust(ndigits, "0")


def correct_decimal_digits(x, reference, digits: int) -> int:
    """Leading digits after the decimal point shared by ``x`` and ``reference``.

    Both values are truncated (never rounded) to ``digits - 1`` decimals, so a
    self-comparison returns ``digits - 1``.  Differing signs or integer parts
    score zero.
    """
    if digits < 20:
        raise ValueError("comparison needs a common precision of at least 20 digits")
    from .precision import _mp_context

    mp = _mp_context(digits + 10)
    x, reference = mp.mpf(x), mp.mpf(reference)
    if (x < 0) != (reference < 0):
        return 0
    n = digits - 1
    ix, fx = _fixed_digits(x, n, mp)
    ir, fr = _fixed_digits(reference, n, mp)
    if ix != ir:
        return 0
    count = 0
    for a, b in zip(fx, fr):
        if a != b:
            break
        count += 1
    return count


@lru_cache(maxsize=16)
def gamma_minimum(ctx: PrecisionContext):
    """Abscissa ``x_min ~ 1.4616`` of the minimum of Gamma on ``x > 0``."""
    mp = ctx.mp
    return bracketed_newton(
        mp.digamma, lambda x: mp.psi(1, x), mp.mpf("1.4"), mp.mpf("1.5"), ctx
    )


def inverse_gamma(y, ctx: PrecisionContext, branch: str = "upper"):
    """``x`` with ``Gamma(x) = y`` on one monotone branch of Gamma over ``x > 0``.

    ``upper`` is the increasing branch ``x >= x_min``; ``lower`` is the
    decreasing branch ``0 < x <= x_min``.
    """
    mp = ctx.mp
    y = mp.mpf(y)
    xmin = gamma_minimum(ctx)
    gmin = mp.gamma(xmin)
    if y < gmin:
        raise BelowGammaMinimum(f"y={mp.nstr(y, 10)} is below the Gamma minimum {mp.nstr(gmin, 10)}")
    if y == gmin:
        return xmin
    f = lambda x: mp.gamma(x) - y
    df = lambda x: mp.gamma(x) * mp.digamma(x)
    if branch == "upper":
        lo, hi = xmin, y + 2
    elif branch == "lower":
        # Gamma(x) >= 0.8856/x on (0, 1), so Gamma(1/(2y)) >= y
        lo, hi = 1 / (2 * y), xmin
    else:
        raise ValueError(f"unknown branch {branch!r}")
    return bracketed_newton(f, df, lo, hi, ctx)


def _approximant_value(name: str, ctx: PrecisionContext):
    mp = ctx.mp
    if name == "tangent":
        return (4 + mp.pi) / (4 + 4 * mp.sqrt(2))
    if name == "broukhis":
        return (mp.pi / 160) ** (mp.mpf(1) / 13)
    if name == "hammond":
        return inverse_gamma(mp.exp(mp.pi / 3) - mp.log(5), ctx, branch="lower")
    raise ValueError(f"unknown approximant {name!r}; expected one of {APPROXIMANTS}")


def approximant(name: str, ctx: PrecisionContext) -> Approximant:
    """Evaluate a named approximant and score it against the Newton oracle.

    ``tangent``  (4 + pi)/(4 + 4 sqrt 2)
    ``broukhis`` (pi/160)^(1/13)
    ``hammond``  Gamma^-1(e^(pi/3) - ln 5), decreasing branch
    """
    value = _approximant_value(name, ctx)
    score = correct_decimal_digits(value, dottie_newton(ctx), ctx.decimal_digits)
    return Approximant(name, value, score, ctx)


# ---------------------------------------------------------------------------
# Engel expansion


@dataclass(frozen=True)
class EngelExpansion:
    terms: tuple[int, ...]
    truncated: bool = False
    exact: bool = False

    def __post_init__(self) -> None:
        if any(t < 1 for t in self.terms):
            raise ValueError("Engel terms must be positive")
        if any(a > b for a, b in zip(self.terms, self.terms[1:])):
            raise ValueError("Engel terms must be non-decreasing")

    def partial_sums(self) -> list[Fraction]:
        out, prod, total = [], 1, Fraction(0)
        for a in self.terms:
            prod *= a
            total += Fraction(1, prod)
            out.append(total)
        return out

    def reconstruction(self, k: int | None = None) -> Fraction:
        sums = self.partial_sums()
        if not sums:
            return Fraction(0)
        return sums[(len(sums) if k is None else k) - 1]

    def residual_bound(self, k: int | None = None) -> Fraction:
        """``1/(a_1 ... a_k)``, which bounds ``x`` minus the ``k``-term sum."""
        prod = 1
        for a in self.terms[: len(self.terms) if k is None else k]:
            prod *= a
        return Fraction(1, prod)


def engel_expansion(x, n_terms: int, ctx: PrecisionContext | None = None) -> EngelExpansion:
    """Greedy Engel expansion ``x = 1/a_1 + 1/(a_1 a_2) + ...`` of ``0 < x <= 1``.

    Rationals (``int`` or ``Fraction``) are expanded exactly and terminate.
    Real inputs run at ``ctx`` precision with a running error bound that starts
    at ``10**-P`` and is multiplied by ``a_k`` at each step; once the bound
    can no longer certify ``ceil(1/u_k)`` the expansion stops with
    ``truncated=True``.
    """
    if n_terms < 0:
        raise ValueError("n_terms must be non-negative")
    if isinstance(x, (int, Fraction)):
        return _engel_exact(Fraction(x), n_terms)
    if ctx is None:
        raise ValueError("real inputs need a PrecisionContext")
    mp = ctx.mp
    u = mp.mpf(x)
    if not 0 < u <= 1:
        raise ValueError("x must lie in (0, 1]")
    err = mp.mpf(10) ** (-ctx.decimal_digits)
    terms: list[int] = []
    while len(terms) < n_terms:
        if u <= err:
            # cannot tell u from zero: either exact termination or lost precision
            return EngelExpansion(tuple(terms), truncated=True)
        lo_inv, hi_inv = 1 / (u + err), 1 / (u - err)
        a = int(mp.ceil(1 / u))
        if int(mp.ceil(lo_inv)) != a or int(mp.ceil(hi_inv)) != a:
            return EngelExpansion(tuple(terms), truncated=True)
        terms.append(a)
        u = a * u - 1
        err = err * a + mp.eps * a
    return EngelExpansion(tuple(terms))


def _engel_exact(x: Fraction, n_terms: int) -> EngelExpansion:
    if not 0 < x <= 1:
        raise ValueError("x must lie in (0, 1]")
    terms: list[int] = []
    u = x
    while u and len(terms) < n_terms:
        a = -(-u.denominator // u.numerator)  # ceil(1/u)
        terms.append(a)
        u = a * u - 1
    return EngelExpansion(tuple(terms), exact=(u == 0))
