"""Exception types shared across the package."""


class GnumError(Exception):
    """Base class for all package errors."""


class DomainError(GnumError):
    """A structural precondition of a net constructor is violated
    (inverse of a net that may vanish, fractional power of a net that
    may go negative, malformed schedule, ...)."""


class TierError(GnumError):
    """A net was used in a parametrization tier that does not admit it,
    or a cast attempted to strengthen a tier."""


class PreconditionError(GnumError):
    """An operation's mathematical hypothesis does not hold (or could
    not be certified) for the given inputs."""


class SearchExhausted(GnumError):
    """A witness search ran out of budget before locating the object it
    was asked for.  Carries the scanned range in ``detail``."""

    def __init__(self, message: str, detail=None):
        super().__init__(message)
        self.detail = detail


class ParseError(GnumError):
    """Syntax error with position information (1-based line / column)."""

    def __init__(self, message: str, line: int, column: int, expected=()):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column
        self.expected = tuple(expected)
