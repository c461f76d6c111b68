"""Exception types raised by the package."""


class SosaError(Exception):
    """Base class for all package errors."""


class DomainError(SosaError, ValueError):
    """A point lies outside the box domain."""


class ConfigurationError(SosaError, ValueError):
    """Unknown algorithm/problem name or invalid settings."""


class DesignError(SosaError, RuntimeError):
    """An experimental design failed its rank requirement."""


class SurrogateRankError(SosaError, ValueError):
    """The polynomial block [1 | X] is rank deficient."""


class DataError(SosaError, ValueError):
    """Non-finite or malformed training data."""


class NumericError(SosaError, ValueError):
    """Non-finite values where finite ones are required."""
