"""
Channel Model

Statistics of the instantaneous received SNR over a block-fading link:
- Rayleigh fading: exponentially distributed SNR with mean γ̄
- Degenerate: a constant SNR, used as a deterministic test channel

The SNR holds for one coherence time and is redrawn independently for the
next block. Distributions are immutable; sampling always takes an explicit
seed or generator.
"""

from __future__ import annotations
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

import numpy as np

from fading_limits.core.errors import DomainError, UnsupportedOperationError

logger = logging.getLogger("fading_limits.channel")

ArrayLike = Union[float, np.ndarray]

MAX_SEED = 2**64


def _to_output(values: np.ndarray, scalar: bool) -> ArrayLike:
    return float(values) if scalar else values


# =============================================================================
# AVERAGE SNR
# =============================================================================

@dataclass(frozen=True)
class AverageSnr:
    """Average received SNR, kept in both dB and linear form."""
    db: float
    linear: float

    def __post_init__(self):
        if not math.isfinite(self.db) or not self.linear > 0:
            raise DomainError(f"average SNR must be positive and finite (got {self.db} dB)")
        expected = 10.0 ** (self.db / 10.0)
        if abs(self.linear - expected) > 1e-12 * expected:
            raise DomainError(f"inconsistent average SNR: {self.db} dB vs {self.linear} linear")

    @classmethod
    def from_db(cls, db: float) -> "AverageSnr":
        linear = 10.0 ** (db / 10.0)
        if linear == 0.0 or math.isinf(linear):
            raise DomainError(f"average SNR {db} dB is outside the representable range")
        return cls(db=float(db), linear=linear)

    @classmethod
    def from_linear(cls, linear: float) -> "AverageSnr":
        if not linear > 0 or math.isinf(linear):
            raise DomainError(f"linear average SNR must be positive and finite, got {linear}")
        return cls(db=10.0 * math.log10(linear), linear=float(linear))


# =============================================================================
# SNR DISTRIBUTION
# =============================================================================

class DistributionKind(str, Enum):
    """Supported SNR laws."""
    RAYLEIGH = "rayleigh"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class SnrDistribution:
    """
    Distribution of the instantaneous received SNR.

    Rayleigh fading carries `mean_snr`; the degenerate law carries
    `fixed_snr`. Use the `rayleigh` / `degenerate` factories.
    """
    kind: DistributionKind
    mean_snr: Optional[AverageSnr] = None
    fixed_snr: Optional[float] = None

    def __post_init__(self):
        if self.kind == DistributionKind.RAYLEIGH and self.mean_snr is None:
            raise DomainError("Rayleigh fading requires mean_snr")
        if self.kind == DistributionKind.DEGENERATE:
            if self.fixed_snr is None or not (self.fixed_snr >= 0 and math.isfinite(self.fixed_snr)):
                raise DomainError(f"degenerate SNR must be finite and >= 0, got {self.fixed_snr}")

    @classmethod
    def rayleigh(cls, snr_db: float) -> "SnrDistribution":
        return cls(kind=DistributionKind.RAYLEIGH, mean_snr=AverageSnr.from_db(snr_db))

    @classmethod
    def rayleigh_linear(cls, mean_linear: float) -> "SnrDistribution":
        return cls(kind=DistributionKind.RAYLEIGH, mean_snr=AverageSnr.from_linear(mean_linear))

    @classmethod
    def degenerate(cls, value: float) -> "SnrDistribution":
        return cls(kind=DistributionKind.DEGENERATE, fixed_snr=float(value))

    @property
    def is_continuous(self) -> bool:
        return self.kind == DistributionKind.RAYLEIGH

    @property
    def scale(self) -> float:
        """Linear mean SNR of a Rayleigh channel."""
        self.require_continuous("scale")
        return self.mean_snr.linear

    def require_continuous(self, operation: str) -> None:
        """Raise for operations only defined on a continuous SNR law."""
        if not self.is_continuous:
            raise UnsupportedOperationError(
                f"{operation} is not supported for {self.kind.value} SNR distributions"
            )

    def mean(self) -> float:
        if self.kind == DistributionKind.RAYLEIGH:
            return self.mean_snr.linear
        return self.fixed_snr

    # -------------------------------------------------------------------------
    # Density, distribution, quantile
    # -------------------------------------------------------------------------

    def pdf(self, snr: ArrayLike) -> ArrayLike:
        """Density p_γ(γ) for γ >= 0."""
        self.require_continuous("pdf")
        scalar = np.ndim(snr) == 0
        x = np.asarray(snr, dtype=float)
        if np.any(x < 0) or np.any(np.isnan(x)):
            raise DomainError("pdf is defined for SNR >= 0")
        g = self.mean_snr.linear
        return _to_output(np.exp(-x / g) / g, scalar)

    def cdf(self, snr: ArrayLike) -> ArrayLike:
        """Pr[γ <= x]; zero below the origin."""
        scalar = np.ndim(snr) == 0
        x = np.asarray(snr, dtype=float)
        if self.kind == DistributionKind.RAYLEIGH:
            out = -np.expm1(-np.maximum(x, 0.0) / self.mean_snr.linear)
        else:
            out = np.where(x >= self.fixed_snr, 1.0, 0.0)
        return _to_output(out, scalar)

    def quantile(self, p: ArrayLike) -> ArrayLike:
        """Inverse cdf for 0 <= p < 1."""
        scalar = np.ndim(p) == 0
        q = np.asarray(p, dtype=float)
        if np.any(q < 0) or np.any(q >= 1) or np.any(np.isnan(q)):
            raise DomainError(f"quantile probability must lie in [0, 1), got {p}")
        if self.kind == DistributionKind.RAYLEIGH:
            out = -self.mean_snr.linear * np.log1p(-q)
        else:
            out = np.full_like(q, self.fixed_snr)
        return _to_output(out, scalar)

    # -------------------------------------------------------------------------
    # Sampling
    # -------------------------------------------------------------------------

    def draw(self, rng: np.random.Generator, size) -> np.ndarray:
        """Draw i.i.d. block SNRs from an existing generator."""
        if self.kind == DistributionKind.RAYLEIGH:
            return rng.exponential(self.mean_snr.linear, size=size)
        return np.full(size, self.fixed_snr, dtype=float)

    def sample_sequence(self, count: int, seed: int) -> np.ndarray:
        """`count` i.i.d. block SNRs, reproducible for a fixed seed."""
        if int(count) != count or count < 1:
            raise DomainError(f"count must be a positive integer, got {count}")
        if not 0 <= seed < MAX_SEED:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {seed}")
        return self.draw(np.random.default_rng(seed), int(count))

    def describe(self) -> str:
        if self.kind == DistributionKind.RAYLEIGH:
            return f"rayleigh(mean={self.mean_snr.db:g} dB)"
        return f"degenerate(snr={self.fixed_snr:g})"
