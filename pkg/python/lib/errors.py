"""
Exception hierarchy for wickflow.

Every error raised on purpose by the library derives from WickflowError, so
the command-line layer can map it to an exit status and print the message
verbatim.
"""

from __future__ import annotations


class WickflowError(Exception):
    """Base class for all wickflow errors."""

    def __init__(self, message: str, original_error: Exception | None = None) -> None:
        """
        Initialize the error.

        Args:
            message: Human-readable error message.
            original_error: The original exception that caused this error.
        """
        super().__init__(message)
        self.message = message
        self.original_error = original_error


class ConfigError(WickflowError):
    """Raised when wickflow.yaml lacks an entry or an override is malformed."""


class SpecValidationError(WickflowError):
    """Raised by strict parsing of manifold files, test-function specs and CLI parameters."""


class DomainError(WickflowError):
    """Raised when a point or a finite-difference stencil leaves the chart domain."""


class SingularMetricError(WickflowError):
    """Raised when the metric is not invertible or too badly conditioned."""


class ChartExitError(WickflowError):
    """Raised when a geodesic leaves the chart during integration."""

    def __init__(self, message: str, exit_time: float, original_error: Exception | None = None) -> None:
        super().__init__(message, original_error)
        self.exit_time = exit_time


class FlowConvergenceError(WickflowError):
    """Raised when an implicit integrator substep fails to converge."""


class DegeneratePairingError(WickflowError):
    """Raised when the real-time half-form pairing is evaluated at a conjugate point."""


class ValidityRadiusError(WickflowError):
    """Raised when a fiber radius exceeds the range where the Taylor expansions hold."""


class QuadratureConvergenceError(WickflowError):
    """Raised when doubling the quadrature nodes changes the result beyond tolerance."""


class ExtrapolationError(WickflowError):
    """Raised when successive extrapolation levels disagree beyond tolerance."""
