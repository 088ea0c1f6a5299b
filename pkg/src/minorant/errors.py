"""Exception hierarchy shared by every module."""


class MinorantError(Exception):
    """Base class for all library errors."""


class DomainError(MinorantError, ValueError):
    """An argument lies outside the region where the quantity is defined."""


class ValidationError(MinorantError, ValueError):
    """A problem description or config violates one of its invariants.

    ``field`` names the offending input so callers (and the CLI) can report it.
    """

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message


class DivergenceError(MinorantError, ArithmeticError):
    """An integral that must be finite diverges for the given inputs."""


class UnsupportedGaugeError(MinorantError, TypeError):
    """The operation needs a different kind of gauge."""


class NumericFailure(MinorantError, ArithmeticError):
    """An iterative search did not converge; ``bracket`` holds the best interval found."""

    def __init__(self, message, bracket=None):
        super().__init__(message)
        self.bracket = bracket
