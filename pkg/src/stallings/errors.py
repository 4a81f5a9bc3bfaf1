"""Exception hierarchy shared by all modules."""


class StallingsError(Exception):
    """Base class for every error raised by this package."""


class AlphabetError(StallingsError, ValueError):
    """A letter refers to a generator outside the ambient rank."""


class ParseError(StallingsError, ValueError):
    def __init__(self, message, text, line, column):
        self.text = text
        self.line = line
        self.column = column
        super().__init__(f"{message} at line {line}, column {column}")


class RankMismatchError(StallingsError, ValueError):
    """Two objects living in free groups of different rank were combined."""


class PreconditionError(StallingsError, ValueError):
    pass


class NotFoldedError(PreconditionError):
    pass


class NotABasisError(PreconditionError):
    pass


class CapExceededError(StallingsError, ValueError):
    """An enumeration bound is above the configured safety cap."""


class InternalConsistencyError(StallingsError, AssertionError):
    """A property that holds for every valid input failed; this is a bug."""
