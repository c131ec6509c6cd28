"""Exception hierarchy.

The CLI maps each class to a fixed exit code, so library code raises these
rather than returning sentinel values.
"""


class FloquetError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class DomainError(FloquetError, ValueError):
    """An argument lies outside the domain of the requested operation."""

    exit_code = 2


class ConfigError(FloquetError, ValueError):
    """Invalid run configuration (bad flag, unknown config key, coarse grid)."""

    exit_code = 2


class GridInsufficientError(FloquetError):
    """Doubling the spectral grid changed the result beyond tolerance."""

    exit_code = 3


class QuadratureError(FloquetError):
    """Adaptive quadrature failed to converge."""

    exit_code = 4

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class OracleError(FloquetError):
    """The ODE reference integrator could not complete."""

    exit_code = 4
