"""Exception types shared across the laboratory modules."""


class H8Error(Exception):
    """Base class for all errors raised by this package."""


class PoleError(H8Error):
    """Evaluation requested at (or too close to) a pole of the function."""


class DomainError(H8Error):
    """Argument outside the documented domain of an operation."""


class RangeError(H8Error):
    """Value outside the range covered by the backing table or data set."""


class GuardError(H8Error):
    """A numerical guard (denominator underflow, cancellation) tripped."""


class ParseError(H8Error):
    """Malformed input file; carries the offending line number and content."""

    def __init__(self, message: str, line_number: int | None = None, line: str | None = None):
        super().__init__(message)
        self.line_number = line_number
        self.line = line


class ResourceError(H8Error):
    """Requested computation exceeds the configured memory/work budget."""


class InsufficientZeros(H8Error):
    """Truncation height exceeds the height bound of the supplied zero set."""


class GridTooCoarse(H8Error):
    """Sign-change scan could not separate two zeros inside one grid cell."""


class NotPrimitiveError(H8Error):
    """Operation requires a primitive character."""
