"""Per-class demand levels, SNR thresholds and coverage weights.

A class-k user needs ``l`` subchannels when its normalized received gain
``g * d**-gamma`` lies in ``[beta_{k,l}, beta_{k,l-1})``. The weight
``zeta_{k,l}`` is the (shadowing-averaged) area of that region. Thresholds
are stored as arrays ``beta[0..l_k]`` with ``beta[0] = inf``; the infinite
sentinel maps to a zero coverage radius.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import scenario as sc
from ._bisect import bisect_predicate
from .errors import BracketError, NonMonotoneThresholds, QuadratureFailure

_LN10 = math.log(10.0)
WEIGHT_METHODS = ("closed_form", "quadrature")


@dataclass(frozen=True)
class ClassThresholds:
    max_level: int
    thresholds: np.ndarray
    weights: np.ndarray


@dataclass(frozen=True)
class ThresholdTable:
    classes: tuple[ClassThresholds, ...]
    probabilities: tuple[float, ...]
    weight_method: str = "closed_form"

    @property
    def max_level(self) -> int:
        return max(c.max_level for c in self.classes)

    def level_set(self, level: int) -> list[int]:
        """Classes whose demand can reach ``level`` subchannels."""
        return [k for k, c in enumerate(self.classes) if c.max_level >= level]

    def level_mass(self) -> np.ndarray:
        """``sum_k tau_k zeta_{k,l}`` for l = 1..L (area-weighted level masses)."""
        out = np.zeros(self.max_level)
        for tau, c in zip(self.probabilities, self.classes):
            out[:c.max_level] += tau * c.weights
        return out

    def as_dict(self) -> dict:
        return {
            "weight_method": self.weight_method,
            "max_level": self.max_level,
            "classes": [
                {"probability": tau,
                 "max_level": c.max_level,
                 "thresholds": [None if math.isinf(b) else float(b) for b in c.thresholds],
                 "weights": [float(w) for w in c.weights]}
                for tau, c in zip(self.probabilities, self.classes)
            ],
        }


def demand_level(rate_kbps: float, bandwidth_khz: float, min_sinr: float, n_max: int) -> int:
    return int(min(n_max, math.ceil(rate_kbps / (bandwidth_khz * math.log2(1.0 + min_sinr)))))


def demand_levels(scenario: sc.CellScenario) -> list[int]:
    r = scenario.radio
    return [demand_level(c.rate_kbps, r.subchannel_bandwidth, r.min_sinr,
                         scenario.max_subchannels_per_user)
            for c in scenario.classes]


def snr_thresholds(scenario: sc.CellScenario, k: int, level: int | None = None) -> np.ndarray:
    """``beta_{k,0..l_k}`` on the ``g * d**-gamma`` scale.

    ``level`` overrides the computed ``l_k``.
    """
    r = scenario.radio
    if level is None:
        level = demand_levels(scenario)[k]
    scale = r.noise_plus_interference / sc.received_power_scale(r)
    spectral = scenario.classes[k].rate_kbps / r.subchannel_bandwidth
    beta = np.empty(level + 1)
    beta[0] = math.inf
    for l in range(1, level):
        beta[l] = scale * math.expm1(spectral / l * math.log(2.0))
    beta[level] = scale * r.min_sinr
    if level >= 2 and not beta[level] < beta[level - 1]:
        raise NonMonotoneThresholds(
            f"class {k}: outage threshold {beta[level]:.6g} >= level-{level - 1} "
            f"threshold {beta[level - 1]:.6g}")
    return beta


def _radius_sq(beta, gamma):
    """``beta**(-2/gamma)``, zero for the infinite sentinel."""
    beta = np.asarray(beta, dtype=float)
    finite = np.isfinite(beta)
    out = np.zeros_like(beta)
    out[finite] = beta[finite] ** (-2.0 / gamma)
    return out


def coverage_weights(scenario: sc.CellScenario, k: int, thresholds=None) -> np.ndarray:
    """Closed form ``pi (beta_l^(-2/g) ^ R^2 - beta_{l-1}^(-2/g) ^ R^2) E[G^(2/g)]``.

    The shadowing moment multiplies the clamped areas, which is exact only
    when the cell-edge clamp is inactive; see ``coverage_weights_quadrature``.
    """
    gamma = scenario.radio.pathloss_exponent
    beta = snr_thresholds(scenario, k) if thresholds is None else thresholds
    r2 = np.minimum(_radius_sq(beta, gamma), scenario.radius_m ** 2)
    area = math.pi * np.diff(r2)
    return np.maximum(area, 0.0) * sc.shadowing_fractional_moment(scenario.shadowing, gamma)


def coverage_weights_quadrature(scenario: sc.CellScenario, k: int, tol: float | None = None,
                                thresholds=None, max_subdivisions: int = 200) -> np.ndarray:
    """Shadowing-averaged areas with the cell-edge clamp inside the expectation.

    Integrates ``pi (min(y r_l^2, R^2) - min(y r_{l-1}^2, R^2))`` against the
    law of ``y = G**(2/gamma)`` with adaptive quadrature over the underlying
    normal variable, split at the kinks of the integrand. ``tol`` is the
    absolute error target per weight (default ``1e-10 * pi R^2``).
    """
    gamma = scenario.radio.pathloss_exponent
    beta = snr_thresholds(scenario, k) if thresholds is None else thresholds
    r2 = _radius_sq(beta, gamma)
    big = scenario.radius_m ** 2
    if tol is None:
        tol = 1e-10 * math.pi * big
    sh = scenario.shadowing
    c = _LN10 / (5.0 * gamma)
    if sh.variance_db2 == 0.0:
        y = math.exp(c * sh.mean_db)
        return math.pi * np.maximum(np.diff(np.minimum(y * r2, big)), 0.0)

    v = sh.std_db
    z_max = 12.0

    def clamped(z, r2_l):
        return min(math.exp(c * (sh.mean_db + v * z)) * r2_l, big)

    out = np.empty(len(beta) - 1)
    for l in range(1, len(beta)):
        lo, hi = r2[l - 1], r2[l]
        kinks = [(math.log(big / r) / c - sh.mean_db) / v for r in (lo, hi) if r > 0]
        edges = sorted({-z_max, z_max, *[z for z in kinks if -z_max < z < z_max]})

        def integrand(z, lo=lo, hi=hi):
            return math.exp(-0.5 * z * z) * (clamped(z, hi) - clamped(z, lo))

        total, err = 0.0, 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            val, e = integrate.quad(integrand, a, b, epsabs=tol / (4 * len(edges)),
                                    epsrel=0.0, limit=max_subdivisions)
            total += val
            err += e
        scale = math.pi / math.sqrt(2.0 * math.pi)
        if err * scale > tol:
            raise QuadratureFailure(f"level {l}: error estimate {err * scale:.3g} > tol {tol:.3g}")
        out[l - 1] = max(total * scale, 0.0)
    return out


def build_table(scenario: sc.CellScenario, weights: str = "closed_form",
                tol: float | None = None) -> ThresholdTable:
    if weights not in WEIGHT_METHODS:
        raise ValueError(f"weights must be one of {WEIGHT_METHODS}")
    levels = demand_levels(scenario)
    rows = []
    for k, level in enumerate(levels):
        beta = snr_thresholds(scenario, k, level)
        if weights == "closed_form":
            zeta = coverage_weights(scenario, k, beta)
        else:
            zeta = coverage_weights_quadrature(scenario, k, tol, beta)
        rows.append(ClassThresholds(level, beta, zeta))
    return ThresholdTable(tuple(rows), tuple(c.probability for c in scenario.classes), weights)


def critical_exponent(scenario: sc.CellScenario, bracket=(2.05, 8.0), tol: float = 1e-6,
                      max_iter: int = 200) -> float:
    """Smallest path-loss exponent at which the penultimate level of the
    most demanding class no longer reaches the cell edge.

    The thresholds are recomputed at every trial exponent because the
    attenuation constant depends on it.
    """
    levels = demand_levels(scenario)
    s = int(np.argmax(levels))
    level = levels[s]
    radius = scenario.radius_m

    def edge_reached(gamma):
        if level == 1:
            return True
        beta = snr_thresholds(scenario.with_gamma(gamma), s, level)[level - 1]
        return beta ** (-1.0 / gamma) <= radius

    lo, hi = bracket
    if edge_reached(lo) or not edge_reached(hi):
        raise BracketError(f"condition does not change sign on [{lo}, {hi}]")
    return bisect_predicate(edge_reached, lo, hi, tol=tol, max_iter=max_iter)[1]
