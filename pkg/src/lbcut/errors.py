"""Exception types shared across the package."""


class ParseError(ValueError):
    """Malformed input file. ``line`` is the 1-based line number, if known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DecompositionError(ValueError):
    """A decomposition violates a structural precondition."""


class ResourceLimitError(RuntimeError):
    """A configured size cap would be exceeded.

    ``projected`` is the quantity that was estimated, ``cap`` the configured limit.
    """

    def __init__(self, message, projected, cap):
        self.projected = projected
        self.cap = cap
        super().__init__(f"{message} (projected {projected}, cap {cap})")
