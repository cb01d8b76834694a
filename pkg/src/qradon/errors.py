"""Exception types shared across the package."""


class QradonError(Exception):
    """Base class for all package-specific failures."""


class ParseError(QradonError):
    """Malformed input file; message carries the offending line/byte offset."""


class DimensionError(QradonError):
    """Grid is not square or shapes of two operands disagree."""


class NormalizationError(QradonError):
    """A vector/image that must carry L2 mass is all zero or not unit norm."""


class SizeError(QradonError):
    """Side length or qubit count outside what an operation supports."""


class ConsistencyError(QradonError):
    """Input violates a structural invariant (e.g. not a valid transform table)."""


class InfiniteSnrError(QradonError):
    """SNR is requested for identical signals; the ratio has no finite value."""
