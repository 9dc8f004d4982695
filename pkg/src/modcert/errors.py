"""Shared exception types."""


class ParseError(ValueError):
    """Malformed graph input; carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InternalInvariantError(RuntimeError):
    """A mathematically guaranteed condition failed; never repair silently."""
