"""Gaussian and Edgeworth bounds on the loss probability, and the matching
dimensioning rules.

All bounds are expressed in the standardized threshold
``N_sigma = (n_avail - lam M_1) / sigma``. The smoothing lags (1, 3.5 and
6.5) are the widths over which a Lipschitz, C^3 or C^5 function with unit
derivative bound can climb from 0 to 1; only those constants enter here.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import Infeasible
from .moments import MomentSet, normalized_moment, standardized_threshold
from .normal_sf import gauss_isf, gauss_sf, hermite, gauss_pdf, q_derivative
from .results import DimensionResult

GAUSSIAN_LAG = 1.0
EDGEWORTH1_LAG = 3.5
EDGEWORTH2_LAG = 6.5

STEIN_CONSTANT = 0.5 * math.sqrt(math.pi / 2.0)
LITERAL_STEIN_CONSTANT = 0.5 * math.sqrt(2.0 / math.pi)
_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)

VARIANTS = ("derivation", "paper_literal")

_ALPHA_MAX = 40.0
_ALPHA_GRID = np.linspace(0.0, _ALPHA_MAX, 1601)


@dataclass(frozen=True)
class BoundedLoss:
    lower: float
    upper: float
    method: str
    certified: bool
    clamped: bool = False

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class ErrorTerms:
    stein_error: float
    edgeworth1_error: float
    edgeworth2_error: float

    def as_dict(self):
        return asdict(self)


def _clamped(lower, upper, method, certified):
    lo = min(max(float(lower), 0.0), 1.0)
    hi = min(max(float(upper), 0.0), 1.0)
    return BoundedLoss(lo, hi, method, certified, clamped=bool(lo != lower or hi != upper))


def error_terms(ms: MomentSet, lam: float | None = None, paper_literal: bool = False) -> ErrorTerms:
    lam = ms.intensity if lam is None else lam
    m3 = normalized_moment(ms, 3, 1.0)
    m4 = normalized_moment(ms, 4, 1.0)
    const = LITERAL_STEIN_CONSTANT if paper_literal else STEIN_CONSTANT
    stein = const * m3 / math.sqrt(lam)
    e1 = (m3 ** 2 / 6.0 + _SQRT_2_OVER_PI * m4 / 9.0) / lam
    e2 = m3 / lam ** 1.5 * (2.0 / 45.0 * m3 ** 2
                            + (4.0 / 135.0 + math.pi ** 2 / 128.0) * _SQRT_2_OVER_PI * m4)
    return ErrorTerms(stein, e1, e2)


# Standardized-scale building blocks ---------------------------------------

def gaussian_sandwich(n_sigma: float, error: float) -> tuple[float, float]:
    return (gauss_sf(n_sigma + GAUSSIAN_LAG) - error,
            gauss_sf(n_sigma - GAUSSIAN_LAG) + error)


def edgeworth1_tail(x, m3):
    """One-term Edgeworth tail ``1 - Q(x) + m3/6 H_2(x) pdf(x)``."""
    return gauss_sf(x) + m3 / 6.0 * q_derivative(3, x)


def edgeworth1_sandwich(n_sigma: float, m3: float, error: float) -> tuple[float, float]:
    lo_x = n_sigma + EDGEWORTH1_LAG
    hi_x = n_sigma - EDGEWORTH1_LAG
    return (gauss_sf(lo_x) - m3 / 6.0 * q_derivative(3, lo_x) - error,
            edgeworth1_tail(hi_x, m3) + error)


def kurtosis_term(x, variant: str = "derivation"):
    """Indicator evaluation of the fourth-derivative term.

    ``int 1[x, inf) H_4 dmu = H_3(x) pdf(x)``; the literal variant reuses
    ``H_2(x) pdf(x)`` instead.
    """
    if variant == "derivation":
        return hermite(3, x) * gauss_pdf(x)
    if variant == "paper_literal":
        return q_derivative(3, x)
    raise ValueError(f"variant must be one of {VARIANTS}")


def edgeworth2_tail(x, m3: float, m4: float, variant: str = "derivation"):
    """Two-term expansion; ``m3 = m(3, lam)`` and ``m4 = m(4, lam)``."""
    return (gauss_sf(x) + m3 / 6.0 * q_derivative(3, x)
            + m3 ** 2 / 72.0 * q_derivative(5, x)
            + m4 / 24.0 * kurtosis_term(x, variant))


# Bounds on the loss probability -------------------------------------------

def gaussian_bounds(ms: MomentSet, lam: float | None, n_avail: float,
                    paper_literal: bool = False) -> BoundedLoss:
    lam = ms.intensity if lam is None else lam
    n_sigma = standardized_threshold(ms, lam, n_avail)
    c = error_terms(ms, lam, paper_literal).stein_error
    lo, hi = gaussian_sandwich(n_sigma, c)
    return _clamped(lo, hi, "gaussian", certified=not paper_literal)


def edgeworth1_bounds(ms: MomentSet, lam: float | None, n_avail: float) -> BoundedLoss:
    lam = ms.intensity if lam is None else lam
    n_sigma = standardized_threshold(ms, lam, n_avail)
    m3 = normalized_moment(ms, 3, lam)
    lo, hi = edgeworth1_sandwich(n_sigma, m3, error_terms(ms, lam).edgeworth1_error)
    return _clamped(lo, hi, "edgeworth1", certified=True)


def edgeworth2_upper(ms: MomentSet, lam: float | None, n_avail: float,
                     variant: str = "derivation") -> BoundedLoss:
    lam = ms.intensity if lam is None else lam
    n_sigma = standardized_threshold(ms, lam, n_avail)
    m3 = normalized_moment(ms, 3, lam)
    m4 = normalized_moment(ms, 4, lam)
    x = n_sigma - EDGEWORTH2_LAG
    hi = edgeworth2_tail(x, m3, m4, variant) + error_terms(ms, lam).edgeworth2_error
    return _clamped(0.0, hi, "edgeworth2", certified=(variant == "derivation"))


# Dimensioning ------------------------------------------------------------

def solve_alpha(tail, epsilon: float) -> float:
    """Smallest ``alpha`` in [0, 40] beyond which ``tail(alpha) <= epsilon``.

    ``tail`` need not be monotone near 0, so the last grid point above
    ``epsilon`` is located first and then refined by bisection to 1e-8.
    The returned value is the end of the final bracket that satisfies the
    inequality.
    """
    values = tail(_ALPHA_GRID)
    above = np.flatnonzero(values > epsilon)
    if above.size == 0:
        return 0.0
    i = int(above[-1])
    if i == _ALPHA_GRID.size - 1:
        raise Infeasible(f"tail stays above {epsilon:g} on [0, {_ALPHA_MAX:g}]")
    lo, hi = float(_ALPHA_GRID[i]), float(_ALPHA_GRID[i + 1])
    while hi - lo > 1e-8:
        mid = 0.5 * (lo + hi)
        if tail(mid) > epsilon:
            lo = mid
        else:
            hi = mid
    return hi


def _size(lag, ms, lam, alpha):
    return int(math.ceil(lag + lam * ms.M(1) + alpha * math.sqrt(lam * ms.M(2))))


def _check_eps(epsilon):
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")


def dimension_gaussian(ms: MomentSet, lam: float | None, epsilon: float,
                       certified: bool = True, paper_literal: bool = False) -> DimensionResult:
    """``ceil(1 + mean + alpha sigma)``.

    Certified: ``1 - Q(alpha) + c = epsilon`` with the Stein error ``c``;
    raises Infeasible when ``c >= epsilon``. Uncertified: ``1 - Q(alpha) = epsilon``.
    """
    _check_eps(epsilon)
    lam = ms.intensity if lam is None else lam
    if certified:
        c = error_terms(ms, lam, paper_literal).stein_error
        if c >= epsilon:
            raise Infeasible(f"Stein error {c:.3g} >= epsilon {epsilon:g}")
        alpha = max(float(gauss_isf(epsilon - c)), 0.0)
        return DimensionResult(_size(GAUSSIAN_LAG, ms, lam, alpha), "gaussian",
                               not paper_literal, alpha, c)
    alpha = max(float(gauss_isf(epsilon)), 0.0)
    return DimensionResult(_size(GAUSSIAN_LAG, ms, lam, alpha), "gaussian", False, alpha, 0.0)


def dimension_edgeworth1(ms: MomentSet, lam: float | None, epsilon: float) -> DimensionResult:
    """Solve ``1 - Q(a) + m3/6 H_2(a) pdf(a) + E_lam = epsilon`` and size with lag 3.5.

    When ``E_lam >= epsilon`` the error term is dropped and the result is
    flagged as not guaranteed.
    """
    _check_eps(epsilon)
    lam = ms.intensity if lam is None else lam
    m3 = normalized_moment(ms, 3, lam)
    err = error_terms(ms, lam).edgeworth1_error
    guarantee = err < epsilon
    used = err if guarantee else 0.0
    alpha = solve_alpha(lambda a: edgeworth1_tail(a, m3) + used, epsilon)
    return DimensionResult(_size(EDGEWORTH1_LAG, ms, lam, alpha), "edgeworth1",
                           guarantee, alpha, used)


def dimension_edgeworth2(ms: MomentSet, lam: float | None, epsilon: float,
                         variant: str = "derivation") -> DimensionResult:
    _check_eps(epsilon)
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    lam = ms.intensity if lam is None else lam
    m3 = normalized_moment(ms, 3, lam)
    m4 = normalized_moment(ms, 4, lam)
    err = error_terms(ms, lam).edgeworth2_error
    within = err < epsilon
    used = err if within else 0.0
    alpha = solve_alpha(lambda a: edgeworth2_tail(a, m3, m4, variant) + used, epsilon)
    return DimensionResult(_size(EDGEWORTH2_LAG, ms, lam, alpha), "edgeworth2",
                           within and variant == "derivation", alpha, used)
