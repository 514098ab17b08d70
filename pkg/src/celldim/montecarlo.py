"""Monte Carlo simulation of the marked Poisson user process.

Each trial draws a Poisson number of users, then for every user a distance
(inverse transform on the disk), a class and a shadowing gain, and applies
the Shannon-based subchannel demand directly. It shares no code with the
threshold tables, so it serves as an independent check of them.

Trials are split over workers in a fixed way; worker ``i`` draws from a
Philox stream keyed on ``(master_seed, i)``. Results depend only on
``(master_seed, workers, trials)``, not on how many threads execute them.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import scenario as sc
from .normal_sf import gauss_isf

BATCH_TRIALS = 50_000


@dataclass(frozen=True)
class SimConfig:
    trials: int = 100_000
    master_seed: int = 0
    workers: int = 1
    ci_level: float = 0.99

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if not 0 < self.ci_level < 1:
            raise ValueError("ci_level must lie in (0, 1)")


@dataclass(frozen=True)
class SimResult:
    loss_estimate: float
    ci: tuple[float, float]
    sample_mean_demand: float
    sample_var_demand: float
    outage_fraction: float
    trials: int
    n_avail: int

    def as_dict(self):
        return {"loss_estimate": self.loss_estimate, "ci": list(self.ci),
                "sample_mean_demand": self.sample_mean_demand,
                "sample_var_demand": self.sample_var_demand,
                "outage_fraction": self.outage_fraction,
                "trials": self.trials, "n_avail": self.n_avail}


@dataclass(frozen=True)
class DemandSample:
    """Per-trial total demands plus user-level outage counts."""

    totals: np.ndarray
    users: int
    outages: int

    @property
    def outage_fraction(self) -> float:
        return self.outages / self.users if self.users else 0.0

    def result(self, n_avail: int, ci_level: float = 0.99) -> SimResult:
        n = self.totals.size
        hits = int(np.count_nonzero(self.totals >= n_avail))
        var = float(self.totals.var(ddof=1)) if n > 1 else 0.0
        return SimResult(hits / n, wilson_interval(hits, n, ci_level),
                         float(self.totals.mean()), var, self.outage_fraction, n, int(n_avail))


def wilson_interval(hits: int, n: int, level: float) -> tuple[float, float]:
    z = float(gauss_isf((1.0 - level) / 2.0))
    p = hits / n
    denom = 1.0 + z * z / n
    center = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    return max(0.0, min(center - half, p)), min(1.0, max(center + half, p))


def _demand(scenario: sc.CellScenario, dist, cls, gain):
    r = scenario.radio
    rates = np.array([c.rate_kbps for c in scenario.classes])
    with np.errstate(divide="ignore", over="ignore"):
        sinr = sc.received_power_scale(r) * gain * dist ** -r.pathloss_exponent \
            / r.noise_plus_interference
        need = np.ceil(rates[cls] / (r.subchannel_bandwidth * np.log2(1.0 + sinr)))
    need = np.clip(need, 1, scenario.max_subchannels_per_user)
    covered = sinr >= r.min_sinr
    return np.where(covered, need, 0).astype(np.int64), covered


def sample_users(scenario: sc.CellScenario, n: int, rng: np.random.Generator):
    """Demands and coverage flags of ``n`` independent users.

    Only the distance to the base station matters, so the polar angle is
    not drawn.
    """
    dist = scenario.radius_m * np.sqrt(rng.random(n))
    cum = np.cumsum([c.probability for c in scenario.classes])
    cls = np.minimum(np.searchsorted(cum, rng.random(n), side="right"), len(cum) - 1)
    sh = scenario.shadowing
    gain = 10.0 ** ((sh.mean_db + sh.std_db * rng.standard_normal(n)) / 10.0)
    return _demand(scenario, dist, cls, gain)


def sample_user_demand(scenario: sc.CellScenario, rng: np.random.Generator) -> int:
    return int(sample_users(scenario, 1, rng)[0][0])


def worker_rng(master_seed: int, worker_index: int) -> np.random.Generator:
    seq = np.random.SeedSequence(master_seed, spawn_key=(worker_index,))
    return np.random.Generator(np.random.Philox(seq))


def _partition(trials: int, workers: int) -> list[int]:
    base, extra = divmod(trials, workers)
    return [base + (1 if i < extra else 0) for i in range(workers)]


def _run_worker(scenario, trials, master_seed, index):
    rng = worker_rng(master_seed, index)
    mu = scenario.mean_users
    chunks, users, outages = [], 0, 0
    done = 0
    while done < trials:
        b = min(BATCH_TRIALS, trials - done)
        counts = rng.poisson(mu, size=b)
        m = int(counts.sum())
        demand, covered = sample_users(scenario, m, rng)
        owner = np.repeat(np.arange(b), counts)
        chunks.append(np.bincount(owner, weights=demand, minlength=b).astype(np.int64))
        users += m
        outages += m - int(np.count_nonzero(covered))
        done += b
    return np.concatenate(chunks) if chunks else np.zeros(0, np.int64), users, outages


def thread_cap() -> int | None:
    raw = os.environ.get("CELLDIM_THREADS")
    if not raw:
        return None
    try:
        return max(1, int(raw))
    except ValueError:
        return None


def simulate_demand(scenario: sc.CellScenario, cfg: SimConfig) -> DemandSample:
    sc.check(scenario)
    parts = _partition(cfg.trials, cfg.workers)
    threads = min(cfg.workers, thread_cap() or cfg.workers, os.cpu_count() or 1)
    jobs = [(scenario, n, cfg.master_seed, i) for i, n in enumerate(parts)]
    if threads <= 1:
        outs = [_run_worker(*job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outs = list(pool.map(lambda job: _run_worker(*job), jobs))
    totals = np.concatenate([o[0] for o in outs])
    return DemandSample(totals, sum(o[1] for o in outs), sum(o[2] for o in outs))


def estimate_loss(scenario: sc.CellScenario, n_avail: int, cfg: SimConfig) -> SimResult:
    """Empirical ``P(N_tot >= n_avail)`` with a Wilson interval at ``cfg.ci_level``."""
    return simulate_demand(scenario, cfg).result(n_avail, cfg.ci_level)
