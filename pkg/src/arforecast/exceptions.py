"""Exception types shared across the package."""


class ArforecastError(Exception):
    """Base class for all package-specific errors."""


class SingularMatrixError(ArforecastError):
    """A symmetric matrix failed the positive-definiteness pivot tolerance."""


class SingularGramError(SingularMatrixError):
    """The lag-vector Gram matrix of a series is numerically singular."""


class SingularDesignError(SingularMatrixError):
    """A regression design matrix is numerically singular."""


class BadOrderError(ArforecastError, ValueError):
    """An autoregressive order is out of range for the requested operation."""


class TooShortError(ArforecastError, ValueError):
    """A series is too short for the requested window configuration."""


class ShortHistoryError(ArforecastError, ValueError):
    """Not enough observations to anchor or fit a forecast."""


class EmptyHorizonError(ArforecastError, ValueError):
    """No error records exist at the requested horizon."""


class DegenerateFitError(ArforecastError, ValueError):
    """A regression target has too few or degenerate points."""


class BadMultiplicityError(ArforecastError, ValueError):
    """Root multiplicities are negative or exceed the stated order."""
