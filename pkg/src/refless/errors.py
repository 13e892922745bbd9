"""Exception hierarchy shared across the package."""


class ReflessError(Exception):
    """Base class for all errors raised by this package."""


class BundleFormatError(ReflessError):
    """A bundle file could not be parsed (bad magic, manifest, or body)."""


class DimensionMismatchError(BundleFormatError):
    """A vector's length disagrees with the declared dimensionality."""


class StructuralError(BundleFormatError):
    """A bundle violates a structural invariant (empty topic/document/sentence)."""


class DegenerateRepresentationError(ReflessError):
    """A text yields no hybrid elements (no kept tokens and sentence vectors disabled)."""


class ConfigError(ReflessError):
    """A configuration value is out of range or inconsistent."""


class RatingsError(ReflessError):
    """A ratings table is malformed or cannot be joined with metric scores."""


class UndefinedCorrelationError(ReflessError):
    """A correlation coefficient is undefined (fewer than two pairs or zero variance)."""
