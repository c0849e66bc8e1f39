"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument violates a precondition (wrong sign, out of range, ...)."""


class ConfigError(ValueError):
    """A run configuration file or override could not be parsed or validated."""


class SingularPivotError(ArithmeticError):
    """A tridiagonal elimination hit a vanishing pivot.

    Signals an invalid grid/parameter combination rather than a coding error.
    """


class InstabilityError(ArithmeticError):
    """A solver produced non-finite values (NaN/inf), i.e. the march blew up."""
