"""Exception hierarchy shared by all modules."""


class RevorderError(ValueError):
    """Base class for every error raised by this package."""


class DimensionMismatch(RevorderError):
    pass


class BlockShapeMismatch(RevorderError):
    pass


class NotUnitary(RevorderError):
    pass


class NotOrthonormal(RevorderError):
    pass


class AmbientMismatch(RevorderError):
    pass


class EmptySubspace(RevorderError):
    pass


class PlanInfeasible(RevorderError):
    pass


class RolNotSatisfied(RevorderError):
    """Raised when an operation needs pinv(AB) = pinv(B) pinv(A) and it fails."""


class MatrixFormatError(RevorderError):
    pass
