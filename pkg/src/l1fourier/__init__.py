"""L1 convergence of Fourier series with mean value bounded variation coefficients.

Condition checkers, kernel constructions, partial sum and Vallee Poussin
synthesis, L1 quadrature and convergence/rate diagnostics over built-in
coefficient families.
"""

__version__ = "0.1.0"

from .sequences import (  # noqa: E402
    CoefficientSequence,
    Sector,
    coeff,
    cosine_coefficient,
    forward_difference,
    make_family,
    sector_margin,
)

__all__ = [
    "CoefficientSequence",
    "Sector",
    "coeff",
    "cosine_coefficient",
    "forward_difference",
    "make_family",
    "sector_margin",
    "__version__",
]
