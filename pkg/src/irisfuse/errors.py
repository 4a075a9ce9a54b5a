"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Raised when an argument violates an operation's preconditions."""


class InvalidConfigurationError(ValueError):
    """Raised when a model or parameter combination cannot be evaluated."""


class IncompatibleRestrictionsError(InvalidConfigurationError):
    """Raised when imposed security restrictions produce a collapsed band (r >= a)."""

    def __init__(self, r: float, a: float, message: str | None = None):
        self.r = r
        self.a = a
        super().__init__(message or f"incompatible restrictions: r={r!r} >= a={a!r}")


class DataError(Exception):
    """Raised for malformed or missing dataset files."""


class CodeFileError(DataError):
    """Raised when a code container is corrupt, truncated or of the wrong version."""
