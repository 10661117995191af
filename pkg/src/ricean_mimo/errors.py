"""Exception types raised across the package."""


class RiceanMimoError(Exception):
    """Base class for all package errors."""


class DimensionError(RiceanMimoError, ValueError):
    """Array shapes are inconsistent."""


class DomainError(RiceanMimoError, ValueError):
    """Input contains NaN/Inf or lies outside the admissible domain."""


class NotPSDError(DomainError):
    """A matrix expected to be positive semidefinite has a negative eigenvalue."""


class ParameterError(RiceanMimoError, ValueError):
    """A scalar parameter is out of range."""


class InfeasibleAngleError(ParameterError):
    """No arrival angle satisfies the requested sine offset."""


class ConfigError(RiceanMimoError, ValueError):
    """An experiment configuration failed validation."""


class NumericalError(RiceanMimoError, ArithmeticError):
    """A computation produced a non-finite result."""
