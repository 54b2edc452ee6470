"""Exception types shared across the package."""


class PathsumError(Exception):
    """Base class for all package errors."""


class FormatError(PathsumError):
    """A file does not conform to its declared on-disk format."""


class AlignmentError(PathsumError):
    """Disc alignment failed (degenerate eigenvector or negative self-loops)."""


class ThresholdInfeasibleError(PathsumError):
    """No sample placement can certify the requested threshold."""
