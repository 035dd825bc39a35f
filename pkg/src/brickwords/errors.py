"""Exception types shared across the package."""


class BrickwordsError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(BrickwordsError, ValueError):
    """An operation was called outside its domain (bad letter, alphabet
    mismatch, non-endomorphism, unbalanced pair, and so on)."""


class ParseError(BrickwordsError, ValueError):
    """A spec string or config could not be parsed."""

    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class OffsetBoundExceeded(BrickwordsError):
    """A simultaneous coding produced an offset outside the configured
    bound, which signals a possibly infinite brick alphabet."""

    def __init__(self, position, offset, bound):
        super().__init__(
            f"offset {offset} at position {position} exceeds bound {bound}; "
            "the brick alphabet may be infinite"
        )
        self.position = position
        self.offset = offset
        self.bound = bound


class RefutationError(BrickwordsError):
    """A candidate substitution cannot satisfy the projection identity:
    the required suffix relation fails for some index letter."""

    def __init__(self, letter, projection, detail=""):
        msg = f"candidate refuted at letter {letter!r}, projection {projection}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
        self.letter = letter
        self.projection = projection


class InconclusiveError(BrickwordsError):
    """A certificate check ran out of local context (window exceeds the
    available diagrams even after escalating the factor length)."""
