"""Moments of the per-user demand functional.

The reference measure excludes the intensity: ``M_p = int f**p dnu`` is in
m^2, and the total demand has mean ``lambda M_1`` and variance
``lambda M_2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateFunctional
from .thresholds import ThresholdTable

MAX_ORDER = 5


def raw_moment(table: ThresholdTable, classes, p: int) -> float:
    """``sum_k tau_k sum_l l**p zeta_{k,l}``.

    ``classes`` gives the class probabilities, either as numbers or as
    objects with a ``probability`` attribute.
    """
    if p < 1:
        raise ValueError("moment order must be >= 1")
    taus = [getattr(c, "probability", c) for c in classes]
    terms = []
    for tau, row in zip(taus, table.classes):
        for l, zeta in enumerate(row.weights, start=1):
            terms.append(tau * l ** p * float(zeta))
    return math.fsum(terms)


@dataclass(frozen=True)
class MomentSet:
    raw_moments: tuple[float, ...]
    intensity: float

    def M(self, p: int) -> float:
        return self.raw_moments[p - 1]

    @property
    def mean_demand(self) -> float:
        return self.intensity * self.M(1)

    @property
    def load(self) -> float:
        return self.mean_demand

    @property
    def variance(self) -> float:
        return self.intensity * self.M(2)

    @property
    def sigma(self) -> float:
        return math.sqrt(self.variance)

    def normalized(self, p: int, lam: float | None = None) -> float:
        return normalized_moment(self, p, lam)

    def as_dict(self) -> dict:
        out = {"raw_moments": list(self.raw_moments), "intensity": self.intensity,
               "load": self.load, "sigma": self.sigma}
        if self.M(2) > 0 and self.intensity > 0:
            out["m3"] = self.normalized(3)
            out["m4"] = self.normalized(4)
        return out


def moment_set(table: ThresholdTable, classes, lam: float) -> MomentSet:
    return MomentSet(tuple(raw_moment(table, classes, p) for p in range(1, MAX_ORDER + 1)),
                     float(lam))


def normalized_moment(ms: MomentSet, p: int, lam: float | None = None) -> float:
    """``m(p, lam) = M_p M_2**(-p/2) lam**(1 - p/2)``."""
    lam = ms.intensity if lam is None else lam
    m2 = ms.M(2)
    if m2 <= 0:
        raise DegenerateFunctional("second moment is zero")
    if lam <= 0:
        raise DegenerateFunctional("intensity must be positive")
    return ms.M(p) * m2 ** (-p / 2.0) * lam ** (1.0 - p / 2.0)


def standardized_threshold(ms: MomentSet, lam: float | None, n_avail: float) -> float:
    """``(n_avail - lam M_1) / sigma``."""
    lam = ms.intensity if lam is None else lam
    var = lam * ms.M(2)
    if not var > 0:
        raise DegenerateFunctional("demand variance is zero")
    return (n_avail - lam * ms.M(1)) / math.sqrt(var)
