"""Exception types shared across the package."""


class GridParseError(ValueError):
    """Raised when a grid file cannot be parsed.

    Carries the 1-based line number of the offending line when known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CapacityLimitError(RuntimeError):
    """Raised when an exhaustive enumeration would exceed the configured limit.

    Callers should fall back to the greedy oracles, which have no such limit.
    """
