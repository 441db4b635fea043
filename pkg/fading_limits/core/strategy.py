"""
Transmission Strategies

Rate laws of the two CSIT-based adaptive strategies:
- ORA: constant power, rate B·log2(1+γ)
- OPRA: water-filling power, rate B·log2(γ/γ_T) above the cutoff γ_T, silent below

Also solves the water-filling cutoff for a fading law and computes ergodic
and outage capacities. γ_T is solved once per channel and cached in the
RatePolicy value.
"""

from __future__ import annotations
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from scipy import integrate, optimize

from fading_limits.core.channel import ArrayLike, SnrDistribution
from fading_limits.core.errors import DomainError, NumericalError

logger = logging.getLogger("fading_limits.strategy")

LN2 = math.log(2.0)
EULER_GAMMA = 0.57721566490153286061

CUTOFF_LOWER_BRACKET = 1e-9
CUTOFF_TOLERANCE = 1e-10
CUTOFF_MAX_ITERATIONS = 200
QUAD_OPTIONS = {"epsabs": 1e-15, "epsrel": 1e-13, "limit": 400}


# =============================================================================
# EXPONENTIAL INTEGRAL
# =============================================================================

def _e1_series(x: float) -> float:
    """E1 by its power series, for 0 < x <= 1."""
    total = 0.0
    term = 1.0
    k = 0
    while True:
        k += 1
        term *= -x / k
        contribution = term / k
        total += contribution
        if abs(contribution) < 1e-17 * max(abs(total), 1e-300):
            break
    return -EULER_GAMMA - math.log(x) - total


def _scaled_e1_continued_fraction(x: float) -> float:
    """e^x·E1(x) by the modified Lentz continued fraction, for x > 1."""
    tiny = 1e-300
    b = x + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 10_000):
        a = -float(i * i)
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return h
    raise NumericalError(f"E1 continued fraction did not converge at x={x}")


def exponential_integral_e1(x: float) -> float:
    """E1(x) = ∫_x^∞ e^(−t)/t dt for x > 0."""
    if not x > 0:
        raise DomainError(f"E1 is defined for x > 0, got {x}")
    if x <= 1.0:
        return _e1_series(x)
    return math.exp(-x) * _scaled_e1_continued_fraction(x)


def scaled_exponential_integral_e1(x: float) -> float:
    """e^x·E1(x); stays finite where e^x alone would overflow."""
    if not x > 0:
        raise DomainError(f"E1 is defined for x > 0, got {x}")
    if x <= 1.0:
        return math.exp(x) * _e1_series(x)
    return _scaled_e1_continued_fraction(x)


# =============================================================================
# VALUE TYPES
# =============================================================================

class PolicyKind(str, Enum):
    """Adaptive transmission strategies."""
    ORA = "ora"
    OPRA = "opra"


@dataclass(frozen=True)
class Bandwidth:
    """Channel bandwidth B in Hz."""
    hz: float

    def __post_init__(self):
        if not (self.hz > 0 and math.isfinite(self.hz)):
            raise DomainError(f"bandwidth must be positive, got {self.hz} Hz")


@dataclass(frozen=True)
class RatePolicy:
    """
    Rate adaptation strategy.

    OPRA carries its water-filling cutoff γ_T.
    """
    kind: PolicyKind
    cutoff_snr: Optional[float] = None

    def __post_init__(self):
        if self.kind == PolicyKind.ORA and self.cutoff_snr is not None:
            raise DomainError("ORA has no cutoff SNR")
        if self.kind == PolicyKind.OPRA:
            if self.cutoff_snr is None or not (self.cutoff_snr > 0 and math.isfinite(self.cutoff_snr)):
                raise DomainError(f"OPRA cutoff SNR must be positive, got {self.cutoff_snr}")

    @classmethod
    def ora(cls) -> "RatePolicy":
        return cls(kind=PolicyKind.ORA)

    @classmethod
    def opra(cls, dist: SnrDistribution) -> "RatePolicy":
        """OPRA with the water-filling cutoff solved for `dist`."""
        return cls(kind=PolicyKind.OPRA, cutoff_snr=waterfilling_cutoff(dist))

    @classmethod
    def opra_with_cutoff(cls, cutoff_snr: float) -> "RatePolicy":
        return cls(kind=PolicyKind.OPRA, cutoff_snr=float(cutoff_snr))

    @property
    def name(self) -> str:
        return self.kind.value


# =============================================================================
# RATE AND POWER LAWS
# =============================================================================

def _check_snr(snr: ArrayLike) -> np.ndarray:
    x = np.asarray(snr, dtype=float)
    if np.any(x < 0) or np.any(np.isnan(x)):
        raise DomainError("SNR must be >= 0")
    return x


def spectral_efficiency(policy: RatePolicy, snr: ArrayLike) -> ArrayLike:
    """Instantaneous rate per Hz in bits/s/Hz."""
    scalar = np.ndim(snr) == 0
    x = _check_snr(snr)
    if policy.kind == PolicyKind.ORA:
        out = np.log1p(x) / LN2
    else:
        out = np.log(np.maximum(x, policy.cutoff_snr) / policy.cutoff_snr) / LN2
    return float(out) if scalar else out


def instantaneous_rate(policy: RatePolicy, snr: ArrayLike, b: Bandwidth) -> ArrayLike:
    """Instantaneous rate in bits/s at SNR γ."""
    return b.hz * spectral_efficiency(policy, snr)


def power_ratio(policy: RatePolicy, snr: ArrayLike) -> ArrayLike:
    """Transmit power relative to the average power budget at SNR γ."""
    scalar = np.ndim(snr) == 0
    x = _check_snr(snr)
    if policy.kind == PolicyKind.ORA:
        out = np.ones_like(x)
    else:
        gamma_t = policy.cutoff_snr
        with np.errstate(divide="ignore"):
            out = np.where(x > gamma_t, 1.0 / gamma_t - 1.0 / np.maximum(x, gamma_t), 0.0)
    return float(out) if scalar else out


def average_power(dist: SnrDistribution, policy: RatePolicy) -> float:
    """E[power_ratio(γ)]; 1 for ORA and for OPRA at its water-filling cutoff."""
    dist.require_continuous("average_power")
    if policy.kind == PolicyKind.ORA:
        return 1.0
    return waterfilling_residual(policy.cutoff_snr, dist, method="quadrature") + 1.0


def no_transmission_probability(dist: SnrDistribution, policy: RatePolicy) -> float:
    """Pr[the transmitter stays silent in a block]."""
    if policy.kind == PolicyKind.ORA:
        return 0.0
    return float(dist.cdf(policy.cutoff_snr))


# =============================================================================
# WATER-FILLING CUTOFF
# =============================================================================

def waterfilling_residual(cutoff: float, dist: SnrDistribution, method: str = "closed_form") -> float:
    """
    ∫_{γ_T}^∞ (1/γ_T − 1/γ) p_γ(γ) dγ − 1.

    `closed_form` uses the Rayleigh expression in E1; `quadrature`
    integrates the definition directly.
    """
    dist.require_continuous("waterfilling_residual")
    if not cutoff > 0:
        raise DomainError(f"cutoff SNR must be positive, got {cutoff}")
    mean = dist.scale
    x = cutoff / mean

    if method == "closed_form":
        e1 = exponential_integral_e1(x) if x < 745.0 else 0.0
        return math.exp(-x) / cutoff - e1 / mean - 1.0

    if method == "quadrature":
        # integrate over u = γ/γ̄ so the integrand is scale-free
        value, _ = integrate.quad(
            lambda u: (1.0 / cutoff - 1.0 / (mean * u)) * math.exp(-u),
            x, math.inf, **QUAD_OPTIONS,
        )
        return value - 1.0

    raise DomainError(f"unknown residual method {method!r}")


def waterfilling_cutoff(dist: SnrDistribution) -> float:
    """Solve the average-power constraint for the OPRA cutoff γ_T."""
    dist.require_continuous("waterfilling_cutoff")
    mean = dist.scale

    lower = CUTOFF_LOWER_BRACKET
    r_lower = waterfilling_residual(lower, dist)
    if not (math.isfinite(r_lower) and r_lower > 0):
        raise NumericalError(
            f"cannot bracket the water-filling cutoff for mean SNR {dist.mean_snr.db:g} dB: "
            f"residual at γ_T={lower:g} is {r_lower:g} (SNR outside the supported range)"
        )

    upper = max(mean, lower)
    for _ in range(CUTOFF_MAX_ITERATIONS):
        r_upper = waterfilling_residual(upper, dist)
        if r_upper < 0:
            break
        upper *= 2.0
    else:
        raise NumericalError(f"bracket expansion failed for mean SNR {dist.mean_snr.db:g} dB (upper={upper:g})")

    root, result = optimize.bisect(
        lambda g: waterfilling_residual(g, dist),
        lower, upper,
        xtol=np.finfo(float).tiny,
        rtol=4 * np.finfo(float).eps,
        maxiter=CUTOFF_MAX_ITERATIONS,
        full_output=True,
        disp=False,
    )
    residual = waterfilling_residual(root, dist)
    logger.debug(
        f"water-filling cutoff for {dist.describe()}: γ_T={root:.12g} "
        f"residual={residual:.3g} iterations={result.iterations}"
    )
    if not abs(residual) < CUTOFF_TOLERANCE:
        raise NumericalError(
            f"water-filling cutoff did not converge for mean SNR {dist.mean_snr.db:g} dB: "
            f"|residual|={abs(residual):.3g} after {result.iterations} iterations"
        )
    return float(root)


# =============================================================================
# CAPACITIES
# =============================================================================

def ergodic_capacity(
    dist: SnrDistribution,
    policy: RatePolicy,
    b: Bandwidth,
    method: str = "quadrature",
) -> float:
    """Average rate E[instantaneous_rate] in bits/s."""
    dist.require_continuous("ergodic_capacity")
    mean = dist.scale

    if method == "closed_form":
        if policy.kind == PolicyKind.ORA:
            return b.hz / LN2 * scaled_exponential_integral_e1(1.0 / mean)
        x = policy.cutoff_snr / mean
        return b.hz / LN2 * (exponential_integral_e1(x) if x < 745.0 else 0.0)

    if method != "quadrature":
        raise DomainError(f"unknown capacity method {method!r}")

    if policy.kind == PolicyKind.ORA:
        value, _ = integrate.quad(
            lambda u: math.log1p(mean * u) * math.exp(-u), 0.0, math.inf, **QUAD_OPTIONS
        )
    else:
        x = policy.cutoff_snr / mean
        value, _ = integrate.quad(
            lambda u: math.log(u / x) * math.exp(-u), x, math.inf, **QUAD_OPTIONS
        )
    return b.hz * value / LN2


def outage_capacity(dist: SnrDistribution, b: Bandwidth, outage_probability: float) -> float:
    """Largest constant rate supported except with probability `outage_probability`."""
    if not 0 < outage_probability < 1:
        raise DomainError(f"outage probability must lie in (0, 1), got {outage_probability}")
    return b.hz * math.log1p(dist.quantile(outage_probability)) / LN2
