"""Standard normal density, distribution function, quantiles and Hermite terms.

Hermite polynomials here are the probabilists' ones (``H_2 = x**2 - 1``).
``q_derivative(k, x)`` is the shorthand ``H_{k-1}(x) * pdf(x)`` that the
Edgeworth correction terms are written with; it equals the true k-th
derivative of the CDF for odd k and its negative for even k.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import integrate, special

from .errors import DomainError

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)

# Coefficients in increasing powers of x.
HERMITE = (
    (1.0,),
    (0.0, 1.0),
    (-1.0, 0.0, 1.0),
    (0.0, -3.0, 0.0, 1.0),
    (3.0, 0.0, -6.0, 0.0, 1.0),
    (0.0, 15.0, 0.0, -10.0, 0.0, 1.0),
)


def gauss_pdf(x):
    x = np.asarray(x, dtype=float)
    out = _INV_SQRT_2PI * np.exp(-0.5 * x * x)
    return out[()] if out.ndim == 0 else out


def gauss_cdf(x):
    out = special.ndtr(np.asarray(x, dtype=float))
    return out[()] if np.ndim(out) == 0 else out


def gauss_sf(x):
    """Upper tail ``1 - cdf(x)`` without cancellation."""
    out = special.ndtr(-np.asarray(x, dtype=float))
    return out[()] if np.ndim(out) == 0 else out


def gauss_quantile(p):
    p = np.asarray(p, dtype=float)
    if np.any((p <= 0) | (p >= 1) | np.isnan(p)):
        raise DomainError("quantile level must lie in (0, 1)")
    out = special.ndtri(p)
    return out[()] if out.ndim == 0 else out


def gauss_isf(p):
    """Inverse of the upper tail: ``x`` with ``gauss_sf(x) == p``."""
    return -gauss_quantile(p)


def hermite(k: int, x):
    if not 0 <= k < len(HERMITE):
        raise DomainError(f"Hermite order {k} not available (0..5)")
    x = np.asarray(x, dtype=float)
    out = np.polynomial.polynomial.polyval(x, HERMITE[k])
    return out[()] if np.ndim(out) == 0 else out


def q_derivative(k: int, x):
    """``H_{k-1}(x) * gauss_pdf(x)`` for k in {3, 4, 5}."""
    if k not in (3, 4, 5):
        raise DomainError("q_derivative is defined for k in {3, 4, 5}")
    return hermite(k - 1, x) * gauss_pdf(x)


def semigroup_time_integral(rate: float = 4.0) -> float:
    """``int_0^inf exp(-rate t) (1 - exp(-2t))**(-1/2) dt`` by adaptive quadrature.

    The inverse square-root singularity at 0 is handled by an algebraic
    weight on [0, 1]; the remainder is a smooth tail integral.
    """
    def regular(t):
        if t == 0.0:
            return 1.0 / math.sqrt(2.0)
        return math.exp(-rate * t) * math.sqrt(t / -math.expm1(-2.0 * t))

    head, _ = integrate.quad(regular, 0.0, 1.0, weight="alg", wvar=(-0.5, 0.0),
                             epsabs=1e-14, epsrel=1e-13)
    tail, _ = integrate.quad(lambda t: math.exp(-rate * t) / math.sqrt(-math.expm1(-2.0 * t)),
                             1.0, math.inf, epsabs=1e-14, epsrel=1e-13)
    return head + tail
