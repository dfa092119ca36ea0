"""Exception hierarchy for beatlaser.

Every failure raised by the services derives from ``BeatLaserError``. Command
handlers translate the two main branches into process exit codes:
configuration problems exit with 1, numerical failures with 2.
"""

from beatlaser.config.settings import EXIT_CONFIG, EXIT_INTERNAL, EXIT_NUMERICAL


class BeatLaserError(Exception):
    """Base class for all beatlaser errors."""


class ConfigurationError(BeatLaserError, ValueError):
    """Invalid physical parameters or run configuration."""


class DimensionMismatchError(BeatLaserError, ValueError):
    """Array shape does not match the configured Fock truncation."""


class NumericalError(BeatLaserError, ArithmeticError):
    """A computation could not produce a trustworthy number."""


class UnstableError(NumericalError):
    """Parameters lie at or above threshold; no decaying steady state exists."""


class NonFiniteError(NumericalError):
    """State overflowed or produced NaN during integration."""


class TruncationOverflowError(NumericalError):
    """Population in the top Fock layer exceeded the boundary tolerance."""

    def __init__(self, message: str, boundary_pop: float, t: float) -> None:
        super().__init__(message)
        self.boundary_pop = boundary_pop
        self.t = t


class FactorizationFailureError(NumericalError):
    """The noise diffusion matrix could not be factorized as R @ R.T."""


class UnphysicalCovarianceError(NumericalError):
    """Covariance matrix violates the uncertainty principle."""


class DegenerateIntensityError(NumericalError):
    """A mode intensity is too small for a normalized correlation."""


def exit_code_for(error: BaseException) -> int:
    """Process exit code for an exception raised while running a command."""
    if isinstance(error, (ConfigurationError, DimensionMismatchError)):
        return EXIT_CONFIG
    if isinstance(error, NumericalError):
        return EXIT_NUMERICAL
    return EXIT_INTERNAL
