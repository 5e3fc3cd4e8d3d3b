"""Exception hierarchy shared across the package."""


class SphwavError(Exception):
    """Base class for all library errors."""


class ParameterError(SphwavError, ValueError):
    """A domain invariant was violated (band-limits, scale ranges, ...)."""


class FormatError(SphwavError):
    """A file or payload does not match its declared format."""
