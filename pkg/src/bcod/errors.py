"""Exception hierarchy shared by every module."""


class BcodError(Exception):
    """Base class for all errors raised by this package."""


class MalformedInputError(BcodError, ValueError):
    pass


class ReadPastEndError(BcodError, EOFError):
    pass


class UndefinedStatisticError(BcodError, ValueError):
    pass


class EmptyAlphabetError(BcodError, ValueError):
    pass


class IncompleteCodebookError(BcodError, KeyError):
    def __init__(self, k: int):
        super().__init__(k)
        self.k = k

    def __str__(self) -> str:
        return f"token class k={self.k} has no codeword in this book"


class DecodeError(BcodError, ValueError):
    """Payload does not parse as a concatenation of codewords."""

    def __init__(self, message: str, position: int):
        super().__init__(message)
        self.position = position


class TruncatedPayloadError(DecodeError):
    pass


class InvalidPayloadError(DecodeError):
    pass


class FormatError(BcodError, ValueError):
    """Archive bytes violate the container layout."""


class BadMagicError(FormatError):
    pass


class UnknownVersionError(FormatError):
    pass


class UnknownModeError(FormatError):
    pass


class VarintOverflowError(FormatError):
    pass


class CorruptArchiveError(FormatError):
    def __init__(self, section: str, detail: str):
        super().__init__(f"corrupt archive ({section}): {detail}")
        self.section = section
        self.detail = detail
