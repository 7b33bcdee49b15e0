"""Exception hierarchy shared by every module of the package."""


class IdClustersError(Exception):
    """Base class for all errors raised by idclusters."""


class DimensionTooLarge(IdClustersError):
    pass


class DimensionMismatch(IdClustersError):
    pass


class GroupTooLarge(IdClustersError):
    pass


class NotASubgroup(IdClustersError):
    pass


class NotAProjector(IdClustersError):
    pass


class NotHermitian(IdClustersError):
    pass


class NotNormalized(IdClustersError):
    pass


class NotOrthogonal(IdClustersError):
    pass


class SizesMismatch(IdClustersError):
    pass


class BadClusterCount(IdClustersError):
    pass


class NumericalDegradation(IdClustersError):
    """A quantity that must be (near) integral or exact came out noisy."""


class IsomorphismImpossible(IdClustersError):
    """The identical and distinct-cluster subspaces differ in dimension."""


class DegenerateSubspace(IdClustersError):
    """The subspaces to be mapped are zero-dimensional."""


class CompatibilityViolated(IdClustersError):
    """An operator fails to commute with a required projector or permutation."""


class PossessionViolated(IdClustersError):
    """A state does not lie inside the range of the required projector."""


class ZeroReducee(IdClustersError):
    pass


class UndetectableOutcome(IdClustersError):
    pass


class VerificationError(IdClustersError):
    """An identity that must hold by construction failed numerically."""


class ParseError(IdClustersError):
    pass


class ValidationError(IdClustersError):
    def __init__(self, message, path=()):
        self.path = tuple(path)
        where = "/".join(str(p) for p in self.path)
        super().__init__(f"{where}: {message}" if where else message)


class MissingInput(IdClustersError):
    pass


class NotADensityOperator(IdClustersError):
    """Matrix is not Hermitian, positive and of unit trace."""
