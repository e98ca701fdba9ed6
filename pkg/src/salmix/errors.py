"""Exception types shared across the package.

Every failure mode raised by the library maps to one of these classes so
callers (and the CLI) can tell input problems apart from internal bugs.
"""


class SalmixError(Exception):
    """Base class for all errors raised by this package."""


class UnsupportedFormatError(SalmixError):
    """Pixel layout, bit depth or channel count we do not handle."""


class NumericDomainError(SalmixError):
    """Non-finite or otherwise out-of-domain numeric input."""


class ShapeError(SalmixError):
    """Mismatched dimensions between values that must agree."""


class MissingInputError(SalmixError):
    """A required input (e.g. target saliency map) was not provided."""


class EmptyInputError(SalmixError):
    """An input collection that must be nonempty was empty."""


class CorruptFileError(SalmixError):
    """A dataset file violates its binary record layout."""


class NotFoundError(SalmixError):
    """A referenced file does not exist."""


class ManifestParseError(SalmixError):
    """A manifest line could not be parsed; carries the line number."""

    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number
