"""Exception types shared across the package."""


class VorgError(Exception):
    """Base class for all package errors."""


class InvalidSymbolError(VorgError):
    """A cell tag outside the supported alphabet."""


class WordStructureError(VorgError):
    """A grid word that is empty or not 4-connected."""


class PatternViolationError(VorgError):
    """An operation required a word in a pattern it does not belong to."""


class NoMemberError(VorgError):
    """No pattern member exists within the requested cell budget."""


class AddressError(VorgError):
    """A border address that does not exist on the contour."""


class MoveRejectedError(VorgError):
    """A reconfiguration move that is not valid for the word."""


class WordParseError(VorgError):
    """Bad word or contour text; carries 1-based line/column."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column
