"""Bennett-type upper bound on upward deviations of the total demand.

For a Poisson functional with non-negative integrand bounded by ``L`` and
variance ``V``,

    P(F >= E F + a) <= exp(-(V / L**2) g(a L / V)),  g(u) = (1 + u) ln(1 + u) - u.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from ._bisect import solve_increasing
from .errors import DomainError
from .moments import MomentSet
from .results import DimensionResult


@dataclass(frozen=True)
class ConcentrationInput:
    mean: float
    variance_like: float
    bound_L: float

    def __post_init__(self):
        if not self.variance_like > 0:
            raise ValueError("variance_like must be positive")
        if not self.bound_L >= 1:
            raise ValueError("bound_L must be >= 1")
        if not self.mean >= 0:
            raise ValueError("mean must be non-negative")

    @classmethod
    def from_moments(cls, ms: MomentSet, max_level: int) -> "ConcentrationInput":
        return cls(ms.mean_demand, ms.variance, float(max_level))


def bennett_g(u: float) -> float:
    if u < 0:
        raise DomainError("bennett_g is defined for u >= 0")
    return (1.0 + u) * math.log1p(u) - u


def concentration_loss_bound(ci: ConcentrationInput, n_avail: float) -> float:
    a = n_avail - ci.mean
    if a <= 0:
        return 1.0
    V, L = ci.variance_like, ci.bound_L
    return min(1.0, math.exp(-(V / L ** 2) * bennett_g(a * L / V)))


def dimension_concentration(ci: ConcentrationInput, epsilon: float) -> DimensionResult:
    """Smallest margin ``a`` with bound ``<= epsilon``, then ``N = ceil(mean + a)``."""
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    V, L = ci.variance_like, ci.bound_L
    target = -math.log(epsilon) * L ** 2 / V
    u = solve_increasing(bennett_g, target, lo=0.0, hi=1.0, tol=1e-10)
    margin = u * V / L
    n = max(math.ceil(ci.mean + margin), math.ceil(ci.mean) + 1)
    return DimensionResult(int(n), "concentration", True, margin, 0.0)
