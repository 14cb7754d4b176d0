"""Exception types shared across modules, with CLI exit-code mapping."""


class RnlsError(Exception):
    """Base class for all package errors."""

    exit_code = 3


class ConfigError(RnlsError):
    """Invalid parameters or run configuration."""

    exit_code = 2


class GridError(ConfigError):
    """Grid construction or grid/parameter mismatch."""


class BracketError(RnlsError):
    """A bisection bracket does not straddle the target."""


class ShootingError(RnlsError):
    """Radial shooting failed (dichotomy undetected, step too coarse)."""


class NonConvergenceError(RnlsError):
    """Iteration hit max_iter; carries the best iterate seen."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class UnresolvedError(RnlsError):
    """Field left the resolved regime without meeting blowup criteria."""


class RegimeMismatchError(RnlsError):
    """Operation requires a different existence/non-existence regime."""


class InsufficientSamplesError(RnlsError):
    """Not enough trace samples for the requested fit."""


class SnapshotFormatError(RnlsError):
    """Malformed binary snapshot."""

    exit_code = 4
