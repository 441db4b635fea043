"""
Multi-Block Entropy Distributions

Numerical engine for sessions spanning several coherence blocks. The bits
delivered in one block, S = T_c·B·log2(1+γ) (or the OPRA analogue), are put
on a uniform lattice and summed over blocks by convolution:

- the OPRA zero atom (a silent block) is carried exactly, never smeared
- lattice point k stands for the cell [(k−½)Δ, (k+½)Δ) and holds the exact
  probability of that cell
- L-fold sums use binary exponentiation
- mass cut off by truncation is tracked and must stay below 1e-6
"""

from __future__ import annotations
import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Union

import numpy as np
from scipy import signal

from fading_limits.core.analytic import (
    EntropyThreshold,
    ThresholdDuration,
    TransmissionSpec,
    as_bits,
    as_seconds,
)
from fading_limits.core.channel import SnrDistribution
from fading_limits.core.errors import DomainError, NumericalError
from fading_limits.core.strategy import LN2, Bandwidth, PolicyKind, RatePolicy

logger = logging.getLogger("fading_limits.multiblock")

# per-block tail cut; sums over many blocks cut less, see block_tail_mass
TAIL_MASS = 1e-9
GRID_PERCENTILE_TAIL = 1e-5
DEFAULT_BINS = 4096
MAX_LOST_MASS = 1e-6
MAX_GRID_POINTS = 1 << 22
# trailing lattice mass below this is folded into lost_mass after each convolution
TRIM_MASS = 1e-13
DIRECT_CONVOLUTION_SIZE = 64


# =============================================================================
# ENTROPY DISTRIBUTION
# =============================================================================

@dataclass(frozen=True, eq=False)
class EntropyDistribution:
    """
    Distribution of delivered bits: an atom at zero plus lattice masses.

    `density[k]` is the probability of lattice cell k divided by the grid
    step, so atom_at_zero + grid_step_bits·Σdensity + lost_mass = 1.
    """
    atom_at_zero: float
    grid_step_bits: float
    density: np.ndarray
    lost_mass: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.atom_at_zero <= 1.0:
            raise DomainError(f"atom_at_zero must lie in [0, 1], got {self.atom_at_zero}")
        if not (self.grid_step_bits > 0 and math.isfinite(self.grid_step_bits)):
            raise DomainError(f"grid step must be positive, got {self.grid_step_bits}")
        density = np.array(self.density, dtype=float)
        if density.ndim != 1 or density.size == 0:
            raise DomainError("density must be a non-empty 1-D array")
        if np.any(density < 0) or not np.all(np.isfinite(density)):
            raise DomainError("density must be finite and nonnegative")
        density.setflags(write=False)
        object.__setattr__(self, "density", density)

    @classmethod
    def point_mass(cls, bits: float, grid_step_bits: float) -> "EntropyDistribution":
        """All mass at the lattice point nearest `bits` (a deterministic block)."""
        if bits < 0:
            raise DomainError(f"point mass location must be >= 0, got {bits}")
        index = int(round(bits / grid_step_bits))
        if index == 0:
            return cls(atom_at_zero=1.0, grid_step_bits=grid_step_bits, density=np.zeros(1))
        density = np.zeros(index + 1)
        density[index] = 1.0 / grid_step_bits
        return cls(atom_at_zero=0.0, grid_step_bits=grid_step_bits, density=density)

    @property
    def s_max(self) -> float:
        """Largest lattice point carried, in bits."""
        return (self.density.size - 1) * self.grid_step_bits

    @cached_property
    def masses(self) -> np.ndarray:
        return self.density * self.grid_step_bits

    @cached_property
    def _cumulative(self) -> np.ndarray:
        return np.cumsum(self.masses)

    @cached_property
    def _points(self) -> np.ndarray:
        return np.arange(self.density.size) * self.grid_step_bits

    def total_mass(self) -> float:
        return self.atom_at_zero + float(self._cumulative[-1])

    def mean(self) -> float:
        return float(np.dot(self._points, self.masses))

    def variance(self) -> float:
        mean = self.mean()
        return float(np.dot((self._points - mean) ** 2, self.masses) + self.atom_at_zero * mean**2)

    def cdf(self, bits: float) -> float:
        """Pr[S < bits], spreading each lattice mass uniformly over its cell."""
        if bits <= 0:
            return 0.0
        u = bits / self.grid_step_bits
        j = int(math.floor(u + 0.5))
        if j >= self.density.size:
            return min(1.0, self.total_mass())
        below = float(self._cumulative[j - 1]) if j > 0 else 0.0
        # cell 0 is [0, ½Δ) since S >= 0
        fraction = (u - (j - 0.5)) if j > 0 else u / 0.5
        return min(1.0, self.atom_at_zero + below + fraction * float(self.masses[j]))

    def _pmf(self) -> np.ndarray:
        pmf = np.array(self.masses)
        pmf[0] += self.atom_at_zero
        return pmf

    def convolve_with(
        self,
        other: "EntropyDistribution",
        max_points: int = MAX_GRID_POINTS,
    ) -> "EntropyDistribution":
        """Distribution of the sum of two independent block entropies."""
        if not math.isclose(self.grid_step_bits, other.grid_step_bits, rel_tol=1e-12):
            raise DomainError(
                f"grid steps differ: {self.grid_step_bits} vs {other.grid_step_bits}"
            )
        a, b = self._pmf(), other._pmf()
        if min(a.size, b.size) <= DIRECT_CONVOLUTION_SIZE:
            pmf = np.convolve(a, b)
        else:
            pmf = signal.fftconvolve(a, b)
        np.clip(pmf, 0.0, None, out=pmf)

        atom = self.atom_at_zero * other.atom_at_zero
        pmf[0] = max(pmf[0] - atom, 0.0)
        lost = 1.0 - (1.0 - self.lost_mass) * (1.0 - other.lost_mass)

        tail = np.cumsum(pmf[::-1])[::-1]
        keep = int(np.searchsorted(-tail, -TRIM_MASS, side="left"))
        keep = max(keep, 1)
        if keep > max_points:
            logger.warning(f"convolution grid overflow: truncating {keep} points to {max_points}")
            keep = max_points
        if keep < pmf.size:
            lost += float(tail[keep])
            pmf = pmf[:keep]

        if lost > MAX_LOST_MASS:
            raise NumericalError(f"convolution lost {lost:.3g} probability mass (limit {MAX_LOST_MASS:g})")
        logger.debug(f"convolved {a.size}x{b.size} -> {pmf.size} points, lost mass {lost:.3g}")
        return EntropyDistribution(
            atom_at_zero=atom,
            grid_step_bits=self.grid_step_bits,
            density=pmf / self.grid_step_bits,
            lost_mass=lost,
        )


# =============================================================================
# PER-BLOCK DISTRIBUTION
# =============================================================================

def _block_scale(t_c: float, b: Bandwidth) -> float:
    if not (t_c > 0 and math.isfinite(t_c)):
        raise DomainError(f"block duration must be positive, got {t_c} s")
    return t_c * b.hz


def _snr_for_bits(policy: RatePolicy, bits: np.ndarray, scale: float) -> np.ndarray:
    """SNR at which one block of `scale` bits per log2-unit delivers `bits`."""
    if policy.kind == PolicyKind.ORA:
        return np.expm1(bits * LN2 / scale)
    return policy.cutoff_snr * np.exp(bits * LN2 / scale)


def _bits_for_snr(policy: RatePolicy, snr: float, scale: float) -> float:
    if policy.kind == PolicyKind.ORA:
        return scale * math.log1p(snr) / LN2
    return scale * math.log(snr / policy.cutoff_snr) / LN2 if snr > policy.cutoff_snr else 0.0


def default_grid_step(
    dist: SnrDistribution,
    policy: RatePolicy,
    t_c: float,
    b: Bandwidth,
    bins: int = DEFAULT_BINS,
) -> float:
    """The block's 99.999-percentile entropy divided into `bins` cells."""
    dist.require_continuous("default_grid_step")
    if bins < 1:
        raise DomainError(f"bins must be positive, got {bins}")
    scale = _block_scale(t_c, b)
    upper = _bits_for_snr(policy, dist.quantile(1.0 - GRID_PERCENTILE_TAIL), scale)
    return (upper if upper > 0 else scale) / bins


def block_tail_mass(blocks: int) -> float:
    """Per-block tail cut for a sum of `blocks` blocks, so their tails stay within MAX_LOST_MASS."""
    return min(TAIL_MASS, MAX_LOST_MASS / (10.0 * max(int(blocks), 1)))


def per_block_entropy_distribution(
    dist: SnrDistribution,
    policy: RatePolicy,
    t_c: float,
    b: Bandwidth,
    grid_step_bits: float,
    tail_mass: float = TAIL_MASS,
) -> EntropyDistribution:
    """Lattice distribution of the bits one block of length t_c delivers."""
    dist.require_continuous("per_block_entropy_distribution")
    if not (grid_step_bits > 0 and math.isfinite(grid_step_bits)):
        raise DomainError(f"grid step must be positive, got {grid_step_bits}")
    scale = _block_scale(t_c, b)

    atom = float(dist.cdf(policy.cutoff_snr)) if policy.kind == PolicyKind.OPRA else 0.0
    if not 0.0 < tail_mass < 1.0:
        raise DomainError(f"tail mass must lie in (0, 1), got {tail_mass}")
    s_max = _bits_for_snr(policy, dist.quantile(1.0 - tail_mass), scale)
    n_cells = int(math.ceil(s_max / grid_step_bits)) + 1
    if n_cells > MAX_GRID_POINTS:
        raise NumericalError(f"grid step {grid_step_bits:g} bits needs {n_cells} points (limit {MAX_GRID_POINTS})")

    edges = np.concatenate(([0.0], (np.arange(n_cells) + 0.5) * grid_step_bits))
    cdf_at_edges = np.asarray(dist.cdf(_snr_for_bits(policy, edges, scale)))
    masses = np.diff(cdf_at_edges)
    np.clip(masses, 0.0, None, out=masses)
    lost = max(0.0, 1.0 - float(cdf_at_edges[-1]))

    logger.debug(
        f"per-block entropy for {dist.describe()} {policy.name}: {n_cells} cells, "
        f"atom {atom:.6g}, tail {lost:.3g}"
    )
    return EntropyDistribution(
        atom_at_zero=atom,
        grid_step_bits=grid_step_bits,
        density=masses / grid_step_bits,
        lost_mass=lost,
    )


def convolve(ed: EntropyDistribution, l: int) -> EntropyDistribution:
    """Distribution of the sum of `l` i.i.d. copies of `ed`."""
    if int(l) != l or l < 1:
        raise DomainError(f"number of blocks must be a positive integer, got {l}")
    l = int(l)
    result: Optional[EntropyDistribution] = None
    base = ed
    while l:
        if l & 1:
            result = base if result is None else result.convolve_with(base)
        l >>= 1
        if l:
            base = base.convolve_with(base)
    return result


# =============================================================================
# MULTI-BLOCK OUTAGE RATES
# =============================================================================

def dor_multiblock(
    spec: TransmissionSpec,
    l: int,
    dist: SnrDistribution,
    policy: RatePolicy,
    grid_step: Optional[float] = None,
    bins: int = DEFAULT_BINS,
) -> float:
    """
    DOR at T_th = L·T_c: Pr[Σ_{l=1}^{L} S_l < H]. The session misses the
    deadline exactly when L blocks together deliver fewer than H bits.
    """
    step = grid_step or default_grid_step(dist, policy, spec.coherence_time_s, spec.bandwidth, bins)
    block = per_block_entropy_distribution(
        dist, policy, spec.coherence_time_s, spec.bandwidth, step, tail_mass=block_tail_mass(l)
    )
    return convolve(block, l).cdf(spec.entropy_bits)


def split_duration(duration_s: float, t_c: float) -> tuple[int, float]:
    """Whole blocks and remainder, snapping float noise at block edges."""
    n = int(math.floor(duration_s / t_c))
    remainder = duration_s - n * t_c
    if remainder <= 1e-9 * t_c:
        remainder = 0.0
    elif t_c - remainder <= 1e-9 * t_c:
        n, remainder = n + 1, 0.0
    return n, remainder


def met_distribution(
    duration_s: float,
    t_c: float,
    dist: SnrDistribution,
    policy: RatePolicy,
    b: Bandwidth,
    grid_step: Optional[float] = None,
    bins: int = DEFAULT_BINS,
) -> EntropyDistribution:
    """Distribution of the bits delivered in `duration_s`: n full blocks plus a partial block."""
    if not duration_s > 0:
        raise DomainError(f"duration must be positive, got {duration_s} s")
    n, remainder = split_duration(duration_s, t_c)
    step = grid_step or default_grid_step(dist, policy, t_c if n > 0 else remainder, b, bins)

    tail = block_tail_mass(n + (1 if remainder > 0 else 0))
    total: Optional[EntropyDistribution] = None
    if n > 0:
        total = convolve(per_block_entropy_distribution(dist, policy, t_c, b, step, tail), n)
    if remainder > 0:
        partial = per_block_entropy_distribution(dist, policy, remainder, b, step, tail)
        total = partial if total is None else total.convolve_with(partial)
    logger.debug(f"met_distribution: {n} full blocks + {remainder:.6g} s remainder, step {step:.6g} bits")
    return total


def ior_multiblock(
    h_th: Union[EntropyThreshold, float],
    duration_s: float,
    t_c: float,
    dist: SnrDistribution,
    policy: RatePolicy,
    b: Bandwidth,
    grid_step: Optional[float] = None,
    bins: int = DEFAULT_BINS,
) -> float:
    """IOR over an arbitrary duration."""
    bits = as_bits(h_th)
    return met_distribution(duration_s, t_c, dist, policy, b, grid_step, bins).cdf(bits)


def dor_from_met(
    spec: TransmissionSpec,
    t_th: Union[ThresholdDuration, float],
    dist: SnrDistribution,
    policy: RatePolicy,
    grid_step: Optional[float] = None,
    bins: int = DEFAULT_BINS,
) -> float:
    """DOR at any threshold via {MTT > T_th} = {MET(T_th) < H}."""
    return ior_multiblock(
        spec.entropy_bits, as_seconds(t_th), spec.coherence_time_s,
        dist, policy, spec.bandwidth, grid_step, bins,
    )
