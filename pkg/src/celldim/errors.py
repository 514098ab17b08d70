"""Exception types raised across the package."""


class CelldimError(Exception):
    """Base class for all package errors."""


class ScenarioError(CelldimError, ValueError):
    """A scenario failed validation or could not be parsed."""


class NonMonotoneThresholds(CelldimError, ValueError):
    """SNR thresholds of a class are not strictly decreasing."""


class QuadratureFailure(CelldimError, ArithmeticError):
    """Adaptive quadrature could not reach the requested tolerance."""


class BracketError(CelldimError, ValueError):
    """A bisection bracket does not contain a sign change."""


class DegenerateFunctional(CelldimError, ArithmeticError):
    """The demand functional has zero variance."""


class CapacityError(CelldimError, MemoryError):
    """The exact pmf support exceeds the configured memory budget."""


class DomainError(CelldimError, ValueError):
    """Argument outside the domain of a special function."""


class Infeasible(CelldimError, ArithmeticError):
    """A dimensioning equation has no admissible solution."""
