"""Exception types shared across the package."""


class FddeAtlasError(Exception):
    """Base class for all package errors."""


class DomainError(FddeAtlasError, ValueError):
    """Arguments outside the mathematical domain of an operation."""


class NoRootError(FddeAtlasError, RuntimeError):
    """A bracketing search exhausted its range without a sign change."""


class ConfigError(FddeAtlasError, ValueError):
    """Invalid simulation or embedding configuration."""


class LengthError(FddeAtlasError, ValueError):
    """A time series is too short for the requested transform."""


class DegenerateError(FddeAtlasError, RuntimeError):
    """Input data carries no usable signal (e.g. a constant series)."""


class ExprSyntaxError(FddeAtlasError, ValueError):
    """Malformed right-hand-side expression.

    Attributes
    ----------
    position : int
        Byte offset into the source text where parsing failed.
    expected : tuple of str
        Token categories that would have been accepted at that point.
    """

    def __init__(self, message, position, expected=()):
        super().__init__(f"{message} at offset {position}")
        self.position = position
        self.expected = tuple(expected)


class UnknownIdentifierError(ExprSyntaxError):
    """Identifier other than the state variables `x` and `xd`."""

    def __init__(self, name, position):
        super().__init__(f"unknown identifier {name!r}", position, ("x", "xd"))
        self.name = name
