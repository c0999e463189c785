"""Exception types shared across fracwave."""

from __future__ import annotations


class FracwaveError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(FracwaveError, ValueError):
    """A model or function parameter is outside its admissible range."""


class DomainError(FracwaveError, ValueError):
    """A function was called outside the domain where it is defined."""


class ConvergenceError(FracwaveError, ArithmeticError):
    """A numerical scheme could not reach its accuracy target."""


class QuadratureError(ConvergenceError):
    """Adaptive quadrature exhausted its subdivision budget.

    Attributes:
        partial: Value accumulated before giving up.
        error: Error estimate attached to ``partial``.
        omega: Angular frequency being evaluated, when known.
    """

    def __init__(self, message: str, partial: complex = 0.0, error: float = float("inf"),
                 omega: float | None = None):
        super().__init__(message)
        self.partial = partial
        self.error = error
        self.omega = omega


class NonIntegrableError(FracwaveError, ValueError):
    """The requested integral diverges for the given density and frequency."""
