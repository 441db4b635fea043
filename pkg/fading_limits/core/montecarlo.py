"""
Monte Carlo Oracle

Seeded episode-level simulation of block-fading transmission:
- each block draws an independent SNR and delivers T_c·rate(γ) bits
- MTT is found inside the block where the cumulative bits reach H
- MET sums full blocks and a fractional last block

Estimates are split into fixed-size batches. Batch i draws from the
substream SeedSequence(master_seed, spawn_key=(i,)), so results do not depend
on how many workers process the batches, and the reduction is an exact sum
of integer counts.
"""

from __future__ import annotations
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Union

import numpy as np

from fading_limits.core.analytic import (
    EntropyThreshold,
    ThresholdDuration,
    TransmissionSpec,
    as_bits,
    as_seconds,
)
from fading_limits.core.channel import MAX_SEED, SnrDistribution
from fading_limits.core.config import config
from fading_limits.core.errors import DomainError
from fading_limits.core.multiblock import split_duration
from fading_limits.core.strategy import Bandwidth, RatePolicy, instantaneous_rate

logger = logging.getLogger("fading_limits.montecarlo")

Z_95 = 1.959963984540054
MIN_EPISODES = 100
EXTRA_BLOCKS = 64


# =============================================================================
# RESULT TYPES
# =============================================================================

@dataclass(frozen=True)
class EpisodeTrace:
    """One simulated transmission session."""
    block_snrs: np.ndarray
    per_block_bits: np.ndarray
    mtt_s: float
    blocks_used: int
    censored: bool


@dataclass(frozen=True)
class McEstimate:
    """Indicator-mean probability estimate with its sampling uncertainty."""
    probability: float
    n_episodes: int
    std_error: float
    ci95_low: float
    ci95_high: float
    master_seed: int

    @classmethod
    def from_count(cls, hits: int, n_episodes: int, master_seed: int) -> "McEstimate":
        p = hits / n_episodes
        se = math.sqrt(p * (1.0 - p) / n_episodes)
        return cls(
            probability=p,
            n_episodes=n_episodes,
            std_error=se,
            ci95_low=max(0.0, p - Z_95 * se),
            ci95_high=min(1.0, p + Z_95 * se),
            master_seed=master_seed,
        )


@dataclass(frozen=True)
class MttMoments:
    """First- and second-order statistics of the transmission time."""
    mean_s: float
    variance_s2: float
    n_completed: int
    n_censored: int
    master_seed: int


@dataclass(frozen=True)
class Agreement:
    """Outcome of comparing an estimate with a deterministic reference."""
    reference: float
    z_score: float
    ok: bool


def agreement(estimate: McEstimate, reference: float, sigmas: float = 4.0) -> Agreement:
    """
    |p̂ − p| in standard errors. The error uses the larger of the reference
    and estimate variances, floored at 1/n so exact 0/1 estimates compare.
    """
    n = estimate.n_episodes
    sigma = max(
        math.sqrt(max(reference * (1.0 - reference), 0.0) / n),
        estimate.std_error,
        1.0 / n,
    )
    z = abs(estimate.probability - reference) / sigma
    return Agreement(reference=reference, z_score=z, ok=z <= sigmas)


# =============================================================================
# SINGLE EPISODES
# =============================================================================

def _check_seed(seed: int) -> int:
    if int(seed) != seed or not 0 <= seed < MAX_SEED:
        raise DomainError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return int(seed)


def simulate_mtt(
    spec: TransmissionSpec,
    policy: RatePolicy,
    dist: SnrDistribution,
    seed: int,
    max_blocks: int,
) -> EpisodeTrace:
    """Simulate one session until H bits are delivered or max_blocks pass."""
    if int(max_blocks) != max_blocks or max_blocks < 1:
        raise DomainError(f"max_blocks must be a positive integer, got {max_blocks}")
    snrs = dist.sample_sequence(int(max_blocks), _check_seed(seed))
    rates = np.asarray(instantaneous_rate(policy, snrs, spec.bandwidth))
    bits = spec.coherence_time_s * rates
    cumulative = np.cumsum(bits)

    index = int(np.searchsorted(cumulative, spec.entropy_bits, side="left"))
    if index >= max_blocks:
        return EpisodeTrace(
            block_snrs=snrs,
            per_block_bits=bits,
            mtt_s=max_blocks * spec.coherence_time_s,
            blocks_used=int(max_blocks),
            censored=True,
        )

    delivered_before = float(cumulative[index - 1]) if index > 0 else 0.0
    fraction = (spec.entropy_bits - delivered_before) / float(rates[index])
    return EpisodeTrace(
        block_snrs=snrs[: index + 1],
        per_block_bits=bits[: index + 1],
        mtt_s=index * spec.coherence_time_s + fraction,
        blocks_used=index + 1,
        censored=False,
    )


def _met_batch(
    duration_s: float,
    t_c: float,
    policy: RatePolicy,
    dist: SnrDistribution,
    b: Bandwidth,
    rng: np.random.Generator,
    size: int,
) -> np.ndarray:
    n, remainder = split_duration(duration_s, t_c)
    total = np.zeros(size)
    for _ in range(n):
        total += t_c * instantaneous_rate(policy, dist.draw(rng, size), b)
    if remainder > 0:
        total += remainder * instantaneous_rate(policy, dist.draw(rng, size), b)
    return total


def simulate_met(
    duration_s: float,
    t_c: float,
    policy: RatePolicy,
    dist: SnrDistribution,
    b: Bandwidth,
    seed: int,
) -> float:
    """Bits delivered by one session over `duration_s` (full blocks plus a fraction)."""
    if not duration_s > 0 or not t_c > 0:
        raise DomainError("duration and coherence time must be positive")
    rng = np.random.default_rng(_check_seed(seed))
    return float(_met_batch(duration_s, t_c, policy, dist, b, rng, 1)[0])


# =============================================================================
# BATCHED ESTIMATION
# =============================================================================

def _mtt_batch(
    spec: TransmissionSpec,
    policy: RatePolicy,
    dist: SnrDistribution,
    rng: np.random.Generator,
    size: int,
    max_blocks: int,
    deadline_s: float = math.inf,
) -> np.ndarray:
    """
    MTT of `size` episodes, block by block across the batch. Episodes still
    running once a block starts at or past `deadline_s`, or after
    `max_blocks`, get inf.
    """
    t_c, target = spec.coherence_time_s, spec.entropy_bits
    mtt = np.full(size, math.inf)
    cumulative = np.zeros(size)
    active = np.arange(size)

    for block in range(max_blocks):
        if active.size == 0 or block * t_c >= deadline_s:
            break
        rates = instantaneous_rate(policy, dist.draw(rng, active.size), spec.bandwidth)
        reached = cumulative[active] + t_c * rates >= target
        done = active[reached]
        mtt[done] = block * t_c + (target - cumulative[done]) / rates[reached]
        cumulative[active] += t_c * rates
        active = active[~reached]
    return mtt


def _batch_sizes(n_episodes: int, batch_size: int) -> List[int]:
    full, rest = divmod(n_episodes, batch_size)
    return [batch_size] * full + ([rest] if rest else [])


def _run_batches(
    task: Callable[[np.random.Generator, int], Union[int, np.ndarray]],
    n_episodes: int,
    master_seed: int,
    batch_size: Optional[int],
    workers: Optional[int],
) -> list:
    if int(n_episodes) != n_episodes or n_episodes < MIN_EPISODES:
        raise DomainError(f"n_episodes must be an integer >= {MIN_EPISODES}, got {n_episodes}")
    master_seed = _check_seed(master_seed)
    sizes = _batch_sizes(int(n_episodes), batch_size or config.batch_size)
    workers = workers or config.workers

    def run(index: int):
        stream = np.random.SeedSequence(entropy=master_seed, spawn_key=(index,))
        return task(np.random.default_rng(stream), sizes[index])

    logger.debug(f"running {n_episodes} episodes in {len(sizes)} batches on {workers} worker(s)")
    if workers == 1 or len(sizes) == 1:
        return [run(i) for i in range(len(sizes))]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(run, range(len(sizes))))


def default_max_blocks(t_th: float, t_c: float) -> int:
    return int(math.ceil(10.0 * t_th / t_c)) + EXTRA_BLOCKS


def estimate_dor(
    spec: TransmissionSpec,
    t_th: Union[ThresholdDuration, float],
    policy: RatePolicy,
    dist: SnrDistribution,
    n_episodes: int,
    master_seed: int,
    max_blocks: Optional[int] = None,
    batch_size: Optional[int] = None,
    workers: Optional[int] = None,
) -> McEstimate:
    """Fraction of episodes whose MTT exceeds T_th (censored episodes exceed)."""
    threshold = as_seconds(t_th)
    max_blocks = max_blocks or default_max_blocks(threshold, spec.coherence_time_s)
    if max_blocks * spec.coherence_time_s <= threshold:
        raise DomainError(
            f"max_blocks={max_blocks} covers {max_blocks * spec.coherence_time_s:g} s, "
            f"not beyond T_th={threshold:g} s"
        )

    def count(rng: np.random.Generator, size: int) -> int:
        mtt = _mtt_batch(spec, policy, dist, rng, size, max_blocks, deadline_s=threshold)
        return int(np.count_nonzero(mtt > threshold))

    hits = sum(_run_batches(count, n_episodes, master_seed, batch_size, workers))
    return McEstimate.from_count(hits, int(n_episodes), int(master_seed))


def estimate_ior(
    h_th: Union[EntropyThreshold, float],
    duration_s: float,
    t_c: float,
    policy: RatePolicy,
    dist: SnrDistribution,
    b: Bandwidth,
    n_episodes: int,
    master_seed: int,
    batch_size: Optional[int] = None,
    workers: Optional[int] = None,
) -> McEstimate:
    """Fraction of episodes whose MET over `duration_s` falls below H_th."""
    threshold = as_bits(h_th)
    if not duration_s > 0 or not t_c > 0:
        raise DomainError("duration and coherence time must be positive")

    def count(rng: np.random.Generator, size: int) -> int:
        met = _met_batch(duration_s, t_c, policy, dist, b, rng, size)
        return int(np.count_nonzero(met < threshold))

    hits = sum(_run_batches(count, n_episodes, master_seed, batch_size, workers))
    return McEstimate.from_count(hits, int(n_episodes), int(master_seed))


def estimate_mtt_moments(
    spec: TransmissionSpec,
    policy: RatePolicy,
    dist: SnrDistribution,
    n_episodes: int,
    master_seed: int,
    max_blocks: int = 10_000,
    batch_size: Optional[int] = None,
    workers: Optional[int] = None,
) -> MttMoments:
    """Mean and variance of MTT over the episodes that finish within max_blocks."""

    def times(rng: np.random.Generator, size: int) -> np.ndarray:
        return _mtt_batch(spec, policy, dist, rng, size, max_blocks)

    mtt = np.concatenate(_run_batches(times, n_episodes, master_seed, batch_size, workers))
    completed = mtt[np.isfinite(mtt)]
    n_censored = int(mtt.size - completed.size)
    if n_censored:
        logger.warning(f"{n_censored} of {mtt.size} episodes censored at {max_blocks} blocks")
    if completed.size < 2:
        raise DomainError("fewer than two episodes completed; raise max_blocks")
    return MttMoments(
        mean_s=float(np.mean(completed)),
        variance_s2=float(np.var(completed, ddof=1)),
        n_completed=int(completed.size),
        n_censored=n_censored,
        master_seed=int(master_seed),
    )
