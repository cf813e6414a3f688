"""Exception hierarchy shared across the package."""


class SIBucketError(Exception):
    """Base class for all package-specific errors."""


class GridMismatchError(SIBucketError):
    """Two fields that must share a grid do not."""


class ParameterError(SIBucketError):
    """Invalid or infeasible parameters for a pattern family or operation."""


class SingularSetError(SIBucketError):
    """Mask set is (numerically) linearly dependent."""


class ConditionError(SIBucketError):
    """A required structural condition (constant-in-span or shift-invariance)
    does not hold for the given pattern set."""


class FieldFormatError(SIBucketError):
    """Malformed SIFIELD1 file."""
