"""Exception types raised across the package."""


class EpslsError(Exception):
    """Base class for all package errors."""


class InvalidInputError(EpslsError, ValueError):
    """Input image is malformed: wrong shape, non-finite samples, mismatched sizes."""


class ParameterError(EpslsError, ValueError):
    """A filter or solver parameter is out of its valid range."""


class ResourceError(EpslsError, MemoryError):
    """A solve was refused or failed because it exceeds available resources."""
