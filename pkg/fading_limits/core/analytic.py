"""
Analytic Limits

Closed-form data-oriented metrics for a single coherence block and for the
ergodic (very long session) regime:

- MTT: minimum time to deliver H bits
- MET: maximum bits deliverable in T seconds
- DOR: Pr[MTT > T_th]
- IOR: Pr[MET(T) < H_th]

Single-block DOR and IOR both reduce to the SNR cdf evaluated at the SNR
needed to push a number of bits through B·T of resources, so the two share
one threshold routine and are identical for H = H_th, T_th = T.
"""

from __future__ import annotations
import logging
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from fading_limits.core.channel import ArrayLike, SnrDistribution
from fading_limits.core.errors import DomainError
from fading_limits.core.strategy import (
    LN2,
    Bandwidth,
    PolicyKind,
    RatePolicy,
    ergodic_capacity,
    instantaneous_rate,
)

logger = logging.getLogger("fading_limits.analytic")

# exp() overflows just past 709; above this the threshold SNR is treated as infinite
MAX_EXPONENT = 700.0


# =============================================================================
# VALUE TYPES
# =============================================================================

@dataclass(frozen=True)
class TransmissionSpec:
    """A data transmission session: H bits over bandwidth B, coherence time T_c."""
    entropy_bits: float
    bandwidth: Bandwidth
    coherence_time_s: float

    def __post_init__(self):
        if not (self.entropy_bits > 0 and math.isfinite(self.entropy_bits)):
            raise DomainError(f"entropy must be positive, got {self.entropy_bits} bits")
        if not (self.coherence_time_s > 0 and math.isfinite(self.coherence_time_s)):
            raise DomainError(f"coherence time must be positive, got {self.coherence_time_s} s")


@dataclass(frozen=True)
class ThresholdDuration:
    """Delay threshold T_th in seconds."""
    seconds: float

    def __post_init__(self):
        if not self.seconds > 0:
            raise DomainError(f"threshold duration must be positive, got {self.seconds} s")


@dataclass(frozen=True)
class EntropyThreshold:
    """Entropy threshold H_th in bits."""
    bits: float

    def __post_init__(self):
        if not self.bits > 0:
            raise DomainError(f"entropy threshold must be positive, got {self.bits} bits")


def as_seconds(value: Union[ThresholdDuration, float]) -> float:
    return value.seconds if isinstance(value, ThresholdDuration) else ThresholdDuration(float(value)).seconds


def as_bits(value: Union[EntropyThreshold, float]) -> float:
    return value.bits if isinstance(value, EntropyThreshold) else EntropyThreshold(float(value)).bits


def _positive_duration(duration_s: float) -> float:
    if not duration_s > 0:
        raise DomainError(f"duration must be positive, got {duration_s} s")
    return float(duration_s)


# =============================================================================
# THRESHOLD SNR
# =============================================================================

def threshold_snr(policy: RatePolicy, bits: float, b: Bandwidth, duration_s: float) -> float:
    """
    Smallest SNR at which `policy` delivers `bits` within `duration_s`
    inside one coherence block. Returns inf once the exponent saturates.
    """
    exponent = bits * LN2 / (b.hz * duration_s)
    if policy.kind == PolicyKind.ORA:
        if exponent > MAX_EXPONENT:
            return math.inf
        return math.expm1(exponent)
    log_threshold = math.log(policy.cutoff_snr) + exponent
    if log_threshold > MAX_EXPONENT:
        return math.inf
    return math.exp(log_threshold)


# =============================================================================
# MINIMUM TRANSMISSION TIME / MAXIMUM ENTROPY THROUGHPUT
# =============================================================================

def mtt_instantaneous(spec: TransmissionSpec, policy: RatePolicy, snr: ArrayLike) -> ArrayLike:
    """H over the instantaneous rate; inf where the rate is zero."""
    scalar = np.ndim(snr) == 0
    rate = np.asarray(instantaneous_rate(policy, snr, spec.bandwidth), dtype=float)
    with np.errstate(divide="ignore"):
        out = np.where(rate > 0, spec.entropy_bits / np.where(rate > 0, rate, 1.0), math.inf)
    return float(out) if scalar else out


def mtt_ergodic(spec: TransmissionSpec, dist: SnrDistribution, policy: RatePolicy) -> float:
    """H / C̄: the transmission time once a session sees every fading state."""
    return spec.entropy_bits / ergodic_capacity(dist, policy, spec.bandwidth)


def met_instantaneous(duration_s: float, b: Bandwidth, policy: RatePolicy, snr: ArrayLike) -> ArrayLike:
    """T·rate(γ) for a duration inside one coherence block."""
    return _positive_duration(duration_s) * instantaneous_rate(policy, snr, b)


def met_ergodic(duration_s: float, dist: SnrDistribution, policy: RatePolicy, b: Bandwidth) -> float:
    """T·C̄."""
    return _positive_duration(duration_s) * ergodic_capacity(dist, policy, b)


# =============================================================================
# OUTAGE RATES
# =============================================================================

def dor_single_block(
    spec: TransmissionSpec,
    t_th: Union[ThresholdDuration, float],
    dist: SnrDistribution,
    policy: RatePolicy,
) -> float:
    """Delay outage rate when the session fits in one coherence block."""
    gamma = threshold_snr(policy, spec.entropy_bits, spec.bandwidth, as_seconds(t_th))
    return float(dist.cdf(gamma))


def ior_single_block(
    h_th: Union[EntropyThreshold, float],
    duration_s: float,
    b: Bandwidth,
    dist: SnrDistribution,
    policy: RatePolicy,
) -> float:
    """Information outage rate for a duration inside one coherence block."""
    gamma = threshold_snr(policy, as_bits(h_th), b, _positive_duration(duration_s))
    return float(dist.cdf(gamma))


def dor_ergodic(
    spec: TransmissionSpec,
    t_th: Union[ThresholdDuration, float],
    dist: SnrDistribution,
    policy: RatePolicy,
) -> float:
    """DOR when the session spans enough blocks for MTT to settle at H/C̄."""
    return 1.0 if mtt_ergodic(spec, dist, policy) > as_seconds(t_th) else 0.0


def ior_ergodic(
    h_th: Union[EntropyThreshold, float],
    duration_s: float,
    dist: SnrDistribution,
    policy: RatePolicy,
    b: Bandwidth,
) -> float:
    """IOR when T is orders of magnitude above the coherence time."""
    return 0.0 if met_ergodic(duration_s, dist, policy, b) >= as_bits(h_th) else 1.0


# =============================================================================
# ORA / OPRA COMPARISON
# =============================================================================

def crossover_exponent(policy: RatePolicy) -> float:
    """
    Bits-per-channel-use H/(B·T) above which OPRA's single-block outage is
    lower than ORA's: γ_T·2^a < 2^a − 1  ⇔  a > log2(1/(1 − γ_T)).
    """
    if policy.kind != PolicyKind.OPRA:
        raise DomainError("crossover is defined against an OPRA policy")
    if policy.cutoff_snr >= 1.0:
        return math.inf
    return -math.log1p(-policy.cutoff_snr) / LN2


def dor_crossover_threshold(spec: TransmissionSpec, policy: RatePolicy) -> float:
    """T*: OPRA has the lower DOR for T_th < T*, ORA for T_th > T*."""
    return spec.entropy_bits / (spec.bandwidth.hz * crossover_exponent(policy))


def ior_crossover_entropy(duration_s: float, b: Bandwidth, policy: RatePolicy) -> float:
    """H*: ORA has the lower IOR for H_th < H*, OPRA for H_th > H*."""
    return b.hz * _positive_duration(duration_s) * crossover_exponent(policy)


def preferred_policy(
    spec: TransmissionSpec,
    t_th: Union[ThresholdDuration, float],
    dist: SnrDistribution,
    opra: Optional[RatePolicy] = None,
) -> RatePolicy:
    """Strategy with the lower single-block DOR for this session (ties go to ORA)."""
    ora = RatePolicy.ora()
    opra = opra or RatePolicy.opra(dist)
    dor_ora = dor_single_block(spec, t_th, dist, ora)
    dor_opra = dor_single_block(spec, t_th, dist, opra)
    logger.debug(f"preferred_policy: DOR ora={dor_ora:.6g} opra={dor_opra:.6g}")
    return opra if dor_opra < dor_ora else ora
