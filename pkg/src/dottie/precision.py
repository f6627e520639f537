"""Precision contexts, result records and a safeguarded root finder.

Real numbers are mpmath ``mpf`` values.  Each :class:`PrecisionContext` owns a
private ``mpmath.MPContext`` so no global precision state is ever touched.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable

import mpmath

DEFAULT_GUARD_DIGITS = 15
GUARD_ENV = "DOTTIE_GUARD_DIGITS"


def default_guard_digits() -> int:
    raw = os.environ.get(GUARD_ENV)
    if raw is None or raw == "":
        return DEFAULT_GUARD_DIGITS
    return int(raw)


@lru_cache(maxsize=64)
def _mp_context(dps: int) -> mpmath.MPContext:
    # contexts are never mutated after creation, so sharing is safe
    ctx = mpmath.MPContext()
    ctx.dps = dps
    return ctx


@dataclass(frozen=True)
class PrecisionContext:
    """Requested output precision plus guard digits for intermediate work."""

    decimal_digits: int
    guard_digits: int = DEFAULT_GUARD_DIGITS

    def __post_init__(self) -> None:
        if self.decimal_digits < 10:
            raise ValueError("decimal_digits must be >= 10")
        if self.guard_digits < 5:
            raise ValueError("guard_digits must be >= 5")

    @property
    def working_digits(self) -> int:
        return self.decimal_digits + self.guard_digits

    @property
    def mp(self) -> mpmath.MPContext:
        """The mpmath context running at ``decimal_digits + guard_digits``."""
        return _mp_context(self.working_digits)

    @property
    def tolerance(self):
        """Comparison tolerance ``10**(1-P)``."""
        return self.mp.mpf(10) ** (1 - self.decimal_digits)

    def with_guard(self, guard_digits: int) -> PrecisionContext:
        return replace(self, guard_digits=guard_digits)

    def doubled_guard(self) -> PrecisionContext:
        return replace(self, guard_digits=2 * self.guard_digits)

    def extra(self, digits: int) -> PrecisionContext:
        """Same output precision with ``digits`` more guard digits."""
        return replace(self, guard_digits=self.guard_digits + digits)

    def to_str(self, x, digits: int | None = None) -> str:
        """Render ``x`` with ``digits`` (default ``P``) significant digits."""
        return to_decimal_string(x, self.decimal_digits if digits is None else digits)

    def close(self, a, b) -> bool:
        return abs(a - b) <= self.tolerance


def to_decimal_string(x, digits: int) -> str:
    return mpmath.nstr(x, digits, strip_zeros=False, min_fixed=-4, max_fixed=max(digits, 30))


@dataclass
class MethodResult:
    """One route's estimate of the Dottie number."""

    method: str
    value: object
    ctx: PrecisionContext
    terms_or_iterations: int
    abs_error_vs_oracle: object | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.abs_error_vs_oracle is not None and self.abs_error_vs_oracle < 0:
            raise ValueError("abs_error_vs_oracle must be non-negative")

    def to_dict(self) -> dict:
        out = {
            "method": self.method,
            "value": self.ctx.to_str(self.value),
            "precision": self.ctx.decimal_digits,
            "terms": self.terms_or_iterations,
            "abs_error": (
                None if self.abs_error_vs_oracle is None
                else to_decimal_string(self.abs_error_vs_oracle, 6)
            ),
        }
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict, guard_digits: int = DEFAULT_GUARD_DIGITS) -> MethodResult:
        ctx = PrecisionContext(int(d["precision"]), guard_digits)
        err = d.get("abs_error")
        return cls(
            method=d["method"],
            value=ctx.mp.mpf(d["value"]),
            ctx=ctx,
            terms_or_iterations=int(d["terms"]),
            abs_error_vs_oracle=None if err is None else ctx.mp.mpf(err),
        )

    @classmethod
    def from_json(cls, text: str) -> MethodResult:
        return cls.from_dict(json.loads(text))


class RootNotFound(RuntimeError):
    pass


def bracketed_newton(
    f: Callable,
    df: Callable,
    lo,
    hi,
    ctx: PrecisionContext,
    *,
    x0=None,
    tol=None,
    max_iter: int | None = None,
):
    """Root of ``f`` in ``[lo, hi]`` by Newton steps kept inside a shrinking bracket.

    Falls back to bisection whenever a Newton step leaves the bracket or stalls.
    ``f(lo)`` and ``f(hi)`` must have opposite signs (or one of them be zero).
    Stops when the step size drops below ``tol`` (default ``10**(-working_digits+2)``).
    """
    mp = ctx.mp
    lo, hi = mp.mpf(lo), mp.mpf(hi)
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise RootNotFound("root is not bracketed")
    if tol is None:
        tol = mp.mpf(10) ** (2 - ctx.working_digits)
    if max_iter is None:
        max_iter = 8 * ctx.working_digits + 100
    x = (lo + hi) / 2 if x0 is None else mp.mpf(x0)
    for _ in range(max_iter):
        fx = f(x)
        if fx == 0:
            return x
        if (fx > 0) == (flo > 0):
            lo, flo = x, fx
        else:
            hi = x
        d = df(x)
        step = fx / d if d != 0 else None
        new = x - step if step is not None else None
        if new is None or not (lo < new < hi):
            new = (lo + hi) / 2
        if abs(new - x) <= tol * max(1, abs(x)) or hi - lo <= tol * max(1, abs(x)):
            return new
        x = new
    raise RootNotFound("bracketed Newton did not converge")
