"""Exception types raised by kdscope validation and computation."""


class KDScopeError(ValueError):
    """Base class for all kdscope errors."""


class NotSquareError(KDScopeError):
    pass


class NotHermitianError(KDScopeError):
    pass


class SizeMismatchError(KDScopeError):
    pass


class DimensionMismatchError(KDScopeError):
    pass


class DimensionTooSmallError(KDScopeError):
    pass


class DimensionTooLargeError(KDScopeError):
    pass


class NotUnitaryError(KDScopeError):
    pass


class NotUnitModulusError(KDScopeError):
    pass


class NotNormalizedError(KDScopeError):
    pass


class InvalidSpinError(KDScopeError):
    pass


class SpinTooLargeError(KDScopeError):
    pass


class ParseError(KDScopeError):
    pass


class InvalidFactorizationError(KDScopeError):
    pass


class DegenerateParameterError(KDScopeError):
    pass


class IndexOutOfRangeError(KDScopeError):
    pass


class EmptySubspaceError(KDScopeError):
    pass


class InternalInconsistencyError(KDScopeError):
    """A mathematical identity failed numerically; indicates a bug, not bad input."""
