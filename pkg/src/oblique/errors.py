"""Exception types shared across the library.

Every error raised deliberately by this package derives from ObliqueError,
so callers (and the CLI) can distinguish invalid input from genuine bugs.
"""


class ObliqueError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(ObliqueError):
    """Malformed input data: an unparseable CSV cell or invalid tree JSON."""


class ConfigurationError(ObliqueError):
    """Invalid parameter combination, e.g. r > m or an unknown column name."""


class EmptyDatasetError(ObliqueError):
    """An operation produced or received a dataset with zero rows."""


class PreprocessingError(ObliqueError):
    """Missing values where a transform or algorithm cannot accept them."""


class ContractViolationError(ObliqueError):
    """A numeric precondition was violated, e.g. an asymmetric matrix."""


class DomainError(ObliqueError):
    """Arguments outside an operation's mathematical domain."""


class UndefinedEffectError(ObliqueError):
    """Effect size is undefined because both groups have zero variance."""
