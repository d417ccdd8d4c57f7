"""Seeded Monte Carlo simulation of the outdated-selection relay network.

Trials are generated in fixed-size blocks. Block ``k`` draws from a Philox
stream keyed by ``SeedSequence([seed, k])``, so the sample set depends only
on ``(config, n_trials, seed)``; workers just pick up blocks, and the
per-block partial results are merged in block order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .config import EstimateWithCI, SystemConfig, validate
from .errors import RangeError

BLOCK_SIZE = 1 << 16
_LN2 = math.log(2.0)


@dataclass(frozen=True)
class SimulationPlan:
    config: SystemConfig
    n_trials: int
    seed: int = 0
    n_workers: int = 1

    def __post_init__(self):
        validate(self.config)
        if isinstance(self.n_trials, bool) or not isinstance(self.n_trials, int) or self.n_trials < 1:
            raise RangeError("n_trials", f"n_trials must be a positive integer, got {self.n_trials!r}")
        if not 0 <= self.seed < 2 ** 64:
            raise RangeError("seed", f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if self.n_workers < 1:
            raise RangeError("n_workers", f"n_workers must be >= 1, got {self.n_workers!r}")


@dataclass(frozen=True)
class TrialOutcome:
    gamma_opr: float
    gamma_opr_e: float
    cs_half: float
    cs_unit: float


@dataclass(frozen=True)
class MonteCarloEstimate:
    p_nonzero: EstimateWithCI
    sop: EstimateWithCI
    ergodic: EstimateWithCI


def block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, block])))


def sample_correlated_exp_pair(rng: np.random.Generator, mean: float, rho: float, size=None):
    """Exponential SNRs at selection time and transmission time with power correlation ``rho``.

    Both are ``mean * |h|^2`` for unit complex Gaussians h~ and
    h = sqrt(rho) h~ + sqrt(1 - rho) w.
    """
    shape = () if size is None else (size if isinstance(size, tuple) else (size,))
    z = rng.standard_normal((4,) + shape)
    a = math.sqrt(rho)
    b = math.sqrt(1.0 - rho)
    old = 0.5 * (z[0] ** 2 + z[1] ** 2)
    new = 0.5 * ((a * z[0] + b * z[2]) ** 2 + (a * z[1] + b * z[3]) ** 2)
    if size is None:
        return mean * float(old), mean * float(new)
    return mean * old, mean * new


def draw_snrs(rng: np.random.Generator, config: SystemConfig, m: int):
    """Destination and eavesdropper SNRs for ``m`` independent trials."""
    old, new = sample_correlated_exp_pair(rng, config.avg_snr_c, config.rho,
                                          size=(m, config.n_relays))
    # argmax returns the first maximum: ties go to the lowest relay index
    best = np.argmax(old, axis=1)
    relay = new[np.arange(m), best]
    gamma_opr = rng.exponential(config.avg_snr_sd, m) + relay
    hop_sb = rng.exponential(config.avg_snr_sb, m)
    hop_be = rng.exponential(config.avg_snr_be, m)
    gamma_opr_e = rng.exponential(config.avg_snr_se, m) + np.minimum(hop_sb, hop_be)
    return gamma_opr, gamma_opr_e


def secrecy_capacity_unit(gamma_opr, gamma_opr_e):
    """log2(1+X) - log2(1+Y) where positive, else 0 (no 1/2 factor)."""
    return np.where(gamma_opr > gamma_opr_e,
                    (np.log1p(gamma_opr) - np.log1p(gamma_opr_e)) / _LN2, 0.0)


def run_trial(rng: np.random.Generator, config: SystemConfig) -> TrialOutcome:
    x, y = draw_snrs(rng, config, 1)
    cs = float(secrecy_capacity_unit(x, y)[0])
    return TrialOutcome(float(x[0]), float(y[0]), 0.5 * cs, cs)


@dataclass(frozen=True)
class _BlockStats:
    n: int
    nonzero: int
    outage: int
    mean: float
    m2: float


def _block_stats(config: SystemConfig, seed: int, block: int, m: int) -> _BlockStats:
    rng = block_rng(seed, block)
    x, y = draw_snrs(rng, config, m)
    positive = x > y
    cs_unit = secrecy_capacity_unit(x, y)
    outage = ~positive | (cs_unit < config.target_rate)
    cs = config.rate_prefactor.factor * cs_unit
    mean = float(np.mean(cs))
    m2 = float(np.sum((cs - mean) ** 2))
    return _BlockStats(m, int(np.count_nonzero(positive)), int(np.count_nonzero(outage)), mean, m2)


def _blocks(n_trials):
    full, rest = divmod(n_trials, BLOCK_SIZE)
    sizes = [BLOCK_SIZE] * full + ([rest] if rest else [])
    return list(enumerate(sizes))


def _run_blocks(plan: SimulationPlan, fn):
    blocks = _blocks(plan.n_trials)
    if plan.n_workers == 1 or len(blocks) == 1:
        return [fn(k, m) for k, m in blocks]
    with ThreadPoolExecutor(max_workers=plan.n_workers) as pool:
        return list(pool.map(lambda km: fn(*km), blocks))


def _merge(stats):
    """Chan's pairwise update, applied in block order."""
    n, mean, m2 = 0, 0.0, 0.0
    for st in stats:
        total = n + st.n
        delta = st.mean - mean
        mean += delta * st.n / total
        m2 += st.m2 + delta * delta * n * st.n / total
        n = total
    return n, mean, m2


def proportion_estimate(count: int, n: int) -> EstimateWithCI:
    p = count / n
    return EstimateWithCI.from_mean(p, math.sqrt(p * (1.0 - p) / n), n)


def estimate_metrics(plan: SimulationPlan) -> MonteCarloEstimate:
    """Empirical P(C_s > 0), outage probability and mean secrecy capacity.

    Outage compares the capacity without the 1/2 factor against the target
    rate; the ergodic mean uses the config's rate_prefactor.
    """
    cfg = plan.config
    stats = _run_blocks(plan, lambda k, m: _block_stats(cfg, plan.seed, k, m))
    n, mean, m2 = _merge(stats)
    nonzero = sum(st.nonzero for st in stats)
    outage = sum(st.outage for st in stats)
    var = m2 / (n - 1) if n > 1 else 0.0
    return MonteCarloEstimate(
        p_nonzero=proportion_estimate(nonzero, n),
        sop=proportion_estimate(outage, n),
        ergodic=EstimateWithCI.from_mean(mean, math.sqrt(var / n), n),
    )


def sample_snrs(plan: SimulationPlan):
    """All simulated (destination, eavesdropper) SNR pairs, concatenated in block order."""
    parts = _run_blocks(plan, lambda k, m: draw_snrs(block_rng(plan.seed, k), plan.config, m))
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


def null_std_error(p0: float, n: int) -> float:
    """Binomial standard error of a proportion evaluated at the hypothesised value."""
    return math.sqrt(max(p0 * (1.0 - p0), 0.0) / n)


def agrees(analytic: float, estimate: EstimateWithCI, probability: bool, n_sigma: float = 3.0) -> bool:
    """Whether an analytic value is consistent with a Monte Carlo estimate.

    Proportions use the standard error at the analytic value, which stays
    meaningful when no trial lands in the rare event.
    """
    se = null_std_error(analytic, estimate.n_samples) if probability else estimate.std_error
    return abs(analytic - estimate.mean) <= n_sigma * se
