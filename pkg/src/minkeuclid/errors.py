"""Exception hierarchy shared by all modules."""


class MinkeuclidError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(MinkeuclidError):
    """Operands have incompatible shapes or live on different spaces."""


class NotPositiveDefinite(MinkeuclidError):
    """A matrix required to be symmetric positive definite is not."""


class NotSymmetric(MinkeuclidError):
    """Input violates the symmetry tolerance and is rejected, not symmetrized."""


class Singular(MinkeuclidError):
    """A matrix that must be invertible is singular within tolerance."""


class ConvergenceFailure(MinkeuclidError):
    """An iterative numerical routine failed to converge."""


class ChartError(MinkeuclidError):
    """A point violates the constraints of the requested coordinate chart."""


class DivergentParameters(MinkeuclidError):
    """Series parameters lie outside the region of absolute convergence."""


class EnumerationBudgetExceeded(MinkeuclidError):
    """A bounded enumeration hit its budget before finishing."""


class QuadratureFailure(MinkeuclidError):
    """Adaptive quadrature did not reach the requested accuracy."""


class JetOrderError(MinkeuclidError):
    """An operator was applied to a jet of insufficient order."""
