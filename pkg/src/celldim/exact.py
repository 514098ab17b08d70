"""Exact law of the total subchannel demand.

The demand is ``sum_l l * M_l`` with independent ``M_l ~ Poisson(m_l)``.
Each Poisson component is truncated where a Chernoff bound drops below its
share of the truncation budget; the discarded mass is carried as a
certified interval on every loss value.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .errors import CapacityError
from .results import DimensionResult, LossEstimate
from .thresholds import ThresholdTable

DEFAULT_MAX_ENTRIES = 10 ** 8


@dataclass(frozen=True)
class CompoundPoissonSpec:
    rates: np.ndarray
    truncation_epsilon: float = 1e-12

    def __post_init__(self):
        rates = np.asarray(self.rates, dtype=float)
        if rates.ndim != 1 or rates.size < 1:
            raise ValueError("rates must be a non-empty vector")
        if np.any(rates < 0) or not np.all(np.isfinite(rates)):
            raise ValueError("rates must be finite and non-negative")
        if not 0 < self.truncation_epsilon < 1:
            raise ValueError("truncation_epsilon must lie in (0, 1)")
        object.__setattr__(self, "rates", rates)

    @property
    def max_level(self) -> int:
        return self.rates.size

    @property
    def mean(self) -> float:
        levels = np.arange(1, self.max_level + 1)
        return float(np.dot(levels, self.rates))

    @property
    def variance(self) -> float:
        levels = np.arange(1, self.max_level + 1)
        return float(np.dot(levels ** 2, self.rates))

    def with_truncation(self, eps: float) -> "CompoundPoissonSpec":
        return CompoundPoissonSpec(self.rates, eps)


@dataclass(frozen=True)
class DemandPmf:
    """Truncated pmf on ``0..N_cap``; ``tail_bound`` is the discarded mass."""

    probabilities: np.ndarray
    tail_bound: float
    _sf: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        p = self.probabilities
        # sf[n] = sum_{w >= n} p[w], summed from the small end for accuracy
        object.__setattr__(self, "_sf", np.append(np.cumsum(p[::-1])[::-1], 0.0))

    @property
    def cap(self) -> int:
        return self.probabilities.size - 1

    def sf(self, n: int) -> float:
        """Retained mass at or above ``n``."""
        if n <= 0:
            return float(self._sf[0])
        if n > self.cap:
            return 0.0
        return float(self._sf[n])

    def sf_array(self) -> np.ndarray:
        return self._sf.copy()

    def mean(self) -> float:
        return float(np.dot(np.arange(self.probabilities.size), self.probabilities))

    def variance(self) -> float:
        n = np.arange(self.probabilities.size)
        mu = self.mean()
        return float(np.dot((n - mu) ** 2, self.probabilities))


def merge_rates(table: ThresholdTable, classes, lam: float,
                truncation_epsilon: float = 1e-12) -> CompoundPoissonSpec:
    """``m_l = sum_{k : l_k >= l} lam tau_k zeta_{k,l}``."""
    taus = [getattr(c, "probability", c) for c in classes]
    rates = np.zeros(table.max_level)
    for tau, row in zip(taus, table.classes):
        rates[:row.max_level] += lam * tau * row.weights
    return CompoundPoissonSpec(rates, truncation_epsilon)


def poisson_chernoff(theta: float, q: float) -> float:
    """``exp(-theta (a ln a + 1 - a))`` with ``a = q / theta``; bounds P(Poisson >= q)."""
    if q <= theta:
        return 1.0
    return math.exp(-(q * (math.log(q) - math.log(theta)) + theta - q))


def truncation_point(theta: float, eps: float) -> int:
    """Smallest integer ``q >= theta`` whose Chernoff tail bound is at most ``eps``."""
    if theta <= 0:
        return 0
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    lo = math.ceil(theta)
    if poisson_chernoff(theta, lo) <= eps:
        return lo
    step = max(1, lo)
    hi = lo + step
    while poisson_chernoff(theta, hi) > eps:
        lo, hi = hi, hi + step
        step *= 2
    # invariant: bound(lo) > eps >= bound(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if poisson_chernoff(theta, mid) <= eps:
            hi = mid
        else:
            lo = mid
    return hi


def demand_pmf(spec: CompoundPoissonSpec, max_entries: int = DEFAULT_MAX_ENTRIES) -> DemandPmf:
    """Convolve the lattice pmfs ``p_l(q l) = Poisson(m_l)(q)``."""
    active = [(l, m) for l, m in enumerate(spec.rates, start=1) if m > 0]
    if not active:
        return DemandPmf(np.array([1.0]), 0.0)
    eps = spec.truncation_epsilon / spec.max_level
    caps = [(l, m, truncation_point(m, eps)) for l, m in active]
    n_cap = sum(l * q for l, _, q in caps)
    if n_cap + 1 > max_entries:
        raise CapacityError(f"pmf support {n_cap + 1} exceeds budget {max_entries}")

    components = []
    log_kept = 0.0
    for l, m, q in caps:
        counts = np.arange(q + 1)
        comp = np.zeros(l * q + 1)
        comp[::l] = stats.poisson.pmf(counts, m)
        components.append(comp)
        log_kept += math.log1p(-float(stats.poisson.sf(q, m)))
    components.sort(key=len)

    pmf = components[0]
    for comp in components[1:]:
        pmf = np.convolve(pmf, comp)
    np.clip(pmf, 0.0, None, out=pmf)
    return DemandPmf(pmf, -math.expm1(log_kept))


def exact_loss(pmf: DemandPmf, n_avail: int) -> LossEstimate:
    """``P(N_tot >= n_avail)`` with the interval ``[value, value + tail_bound]``."""
    if n_avail <= 0:
        return LossEstimate(1.0, 1.0, 1.0, "exact")
    value = pmf.sf(n_avail)
    return LossEstimate(value, value, min(1.0, value + pmf.tail_bound), "exact")


def exact_dimension(spec: CompoundPoissonSpec, epsilon: float,
                    max_entries: int = DEFAULT_MAX_ENTRIES, pmf: DemandPmf | None = None) -> DimensionResult:
    """Smallest ``N`` whose certified loss ``P(N_tot >= N) + tail`` is at most ``epsilon``.

    The truncation budget is tightened to ``epsilon / 100`` if needed.
    """
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    if pmf is None or pmf.tail_bound > epsilon / 100:
        if spec.truncation_epsilon > epsilon / 100:
            spec = spec.with_truncation(epsilon / 100)
        pmf = demand_pmf(spec, max_entries)
    upper = pmf.sf_array() + pmf.tail_bound
    ok = np.flatnonzero(upper[1:] <= epsilon)
    n = int(ok[0]) + 1 if ok.size else pmf.cap + 1
    return DimensionResult(n, "exact", True, float("nan"), pmf.tail_bound)
