"""The Dottie number, the real fixed point of cos, by many independent routes."""

from .mp_eval import dottie_newton
from .precision import MethodResult, PrecisionContext
from .series import (
    CoefficientTable,
    PowerSeries,
    kaplan_coefficient_lagrange,
    kaplan_coefficients_reversion,
)

__all__ = [
    "CoefficientTable",
    "MethodResult",
    "PowerSeries",
    "PrecisionContext",
    "dottie_newton",
    "kaplan_coefficient_lagrange",
    "kaplan_coefficients_reversion",
]

__version__ = "0.1.0"
