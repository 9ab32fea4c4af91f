"""
Exception hierarchy for the F-polynomial toolkit.
Every error carries a machine-readable reason slug used by the CLI.
"""

from typing import Optional


class FPadeError(Exception):
    """Base class for all toolkit errors."""

    reason = "fpade_error"

    def __init__(self, message: str, reason: Optional[str] = None):
        super().__init__(message)
        if reason is not None:
            self.reason = reason


class ConfigError(FPadeError, ValueError):
    """Invalid run configuration (CLI exit code 2)."""

    reason = "config_error"


class NumericalError(FPadeError, ArithmeticError):
    """A computation could not deliver a trustworthy result (CLI exit code 3)."""

    reason = "numerical_error"


class DomainError(NumericalError, ValueError):
    """Arguments outside the domain where an operation is defined."""

    reason = "domain_error"


class BoundViolation(NumericalError):
    """A Taylor coefficient F_n left the band 1 <= |F_n| <= gamma."""

    reason = "bound_violation"


class GridTooCoarse(NumericalError):
    """Fekete search produced points closer than the separation guard."""

    reason = "grid_too_coarse"


class ContourThroughZero(NumericalError):
    """The function nearly vanishes on every nudged contour."""

    reason = "contour_through_zero"


class NonConvergent(NumericalError):
    """An adaptive procedure ran out of its refinement budget."""

    reason = "non_convergent"


class QuadratureNonConvergent(NonConvergent):
    """Doubling the quadrature points moved the result by more than tol."""

    reason = "quadrature_non_convergent"


class AbsHypothesisViolated(DomainError):
    """Fourier data without a tail bound and with too wide a support."""

    reason = "abs_hypothesis_violated"


class ConditioningWarning(UserWarning):
    """Inverse Vandermonde entries exceed the conditioning limit."""
