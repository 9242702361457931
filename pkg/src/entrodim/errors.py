"""Exception hierarchy shared by all entrodim modules.

The CLI maps these onto exit codes: ConfigurationError -> 2, everything
else derived from EntrodimError -> 1.
"""


class EntrodimError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(EntrodimError):
    """Invalid or inconsistent user-supplied configuration."""


class BoundsError(EntrodimError):
    """A request exceeded the available data range (e.g. too few eigenvalues)."""


class TailNotResolvedError(EntrodimError):
    """An explicit semi-axis list never drops below the requested threshold."""


class CoverConstructionError(EntrodimError):
    """A certified cover could not be built within the configured budgets."""


class VerificationError(EntrodimError):
    """A certified check failed (uncovered sample, violated inequality, ...)."""


class DivergenceError(EntrodimError):
    """Time integration blew up; carries the offending dt and mode count."""

    def __init__(self, message: str, dt: float | None = None, modes: int | None = None):
        super().__init__(message)
        self.dt = dt
        self.modes = modes


class NumericsError(EntrodimError):
    """NaN or non-finite values encountered during a computation."""


class NewtonError(EntrodimError):
    """Newton iteration failed to converge; carries the last residual."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual
