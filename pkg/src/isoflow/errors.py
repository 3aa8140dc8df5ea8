"""Exception types shared across the package."""


class IsoflowError(Exception):
    """Base class for all package errors."""


class DimensionError(IsoflowError, ValueError):
    """Operands have incompatible or non-square shapes."""


class ConfigurationError(IsoflowError, ValueError):
    """Invalid flow, tableau, or experiment configuration."""


class ConvergenceError(IsoflowError, RuntimeError):
    """An iterative solver failed to reach its tolerance.

    Carries the last residual so callers can report how far off it was.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class SingularityError(IsoflowError, ValueError):
    """A flow was evaluated at a singular configuration (e.g. colliding vortices)."""


class DegenerateStudyError(IsoflowError, RuntimeError):
    """A convergence study cannot be fitted (too few usable data points)."""
