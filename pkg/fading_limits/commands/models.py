"""
Command Models

Validated request models for the CLI subcommands, plus the unit parser for
entropy quantities and the figure-reproduction presets.
"""

from __future__ import annotations
import re
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from fading_limits.core.channel import SnrDistribution
from fading_limits.core.errors import UsageError
from fading_limits.core.strategy import RatePolicy


# =============================================================================
# ENUMS
# =============================================================================

class Command(str, Enum):
    THRESHOLD = "threshold"
    DOR_CURVE = "dor-curve"
    IOR_CURVE = "ior-curve"
    SIMULATE = "simulate"
    CAPACITY = "capacity"
    CROSSOVER = "crossover"


class PolicyChoice(str, Enum):
    ORA = "ora"
    OPRA = "opra"
    BOTH = "both"

    @property
    def names(self) -> List[str]:
        return ["ora", "opra"] if self == PolicyChoice.BOTH else [self.value]


class Method(str, Enum):
    ANALYTIC = "analytic"
    CONVOLUTION = "convolution"
    MONTECARLO = "montecarlo"
    ALL = "all"

    @property
    def convolution(self) -> bool:
        return self in (Method.CONVOLUTION, Method.ALL)

    @property
    def montecarlo(self) -> bool:
        return self in (Method.MONTECARLO, Method.ALL)


class Metric(str, Enum):
    DOR = "dor"
    IOR = "ior"


class Preset(str, Enum):
    """Reference curve sets: fig1/fig2 are DOR curves, fig3/fig4 IOR curves."""
    FIG1 = "fig1"
    FIG2 = "fig2"
    FIG3 = "fig3"
    FIG4 = "fig4"


# =============================================================================
# ENTROPY UNITS
# =============================================================================

# SI prefixes; a byte is 8 bits, so 1 KB = 8000 bits
ENTROPY_UNITS: Dict[str, float] = {
    "bits": 1.0,
    "bit": 1.0,
    "Kb": 1e3,
    "KB": 8e3,
    "Mb": 1e6,
    "MB": 8e6,
}

_QUANTITY = re.compile(r"^\s*([0-9]*\.?[0-9]+(?:[eE][+-]?[0-9]+)?)\s*([A-Za-z]*)\s*$")


def parse_entropy(text: str) -> float:
    """Parse `<value><unit>` (bits, Kb, KB, Mb, MB; bare numbers are bits) into bits."""
    match = _QUANTITY.match(str(text))
    if not match:
        raise UsageError(f"cannot parse entropy {text!r}; expected e.g. 50KB or 400000bits")
    value, unit = match.groups()
    unit = unit or "bits"
    if unit not in ENTROPY_UNITS:
        raise UsageError(f"unknown entropy unit {unit!r}; use one of {', '.join(ENTROPY_UNITS)}")
    bits = float(value) * ENTROPY_UNITS[unit]
    if not bits > 0:
        raise UsageError(f"entropy must be positive, got {text!r}")
    return bits


# =============================================================================
# REQUEST MODELS
# =============================================================================

class SweepSpec(BaseModel):
    """Sweep of the curve variable, in the command's base unit (s, bits or dB)."""
    start: float
    stop: float
    points: int = Field(ge=2)
    log: bool = True

    @model_validator(mode="after")
    def check_order(self) -> "SweepSpec":
        if not self.start < self.stop:
            raise ValueError(f"sweep start {self.start:g} must be below stop {self.stop:g}")
        if self.log and self.start <= 0:
            raise ValueError("a logarithmic sweep needs a positive start")
        return self

    def values(self) -> np.ndarray:
        if self.log:
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)


class RunConfig(BaseModel):
    """Fully resolved parameters of one CLI invocation."""
    command: Command
    snr_db: List[float] = Field(min_length=1)
    bandwidth_hz: float = Field(gt=0)
    entropy_bits: List[float] = Field(default_factory=list)
    coherence_time_s: Optional[float] = Field(default=None, gt=0)
    threshold_s: List[float] = Field(default_factory=list)
    duration_s: List[float] = Field(default_factory=list)
    policy: PolicyChoice = PolicyChoice.BOTH
    method: Method = Method.ANALYTIC
    metric: Metric = Metric.DOR
    sweep: Optional[SweepSpec] = None
    n_episodes: int = Field(ge=100)
    seed: int = Field(ge=0, lt=2**64)
    workers: int = Field(default=1, ge=1)
    conv_bins: int = Field(default=4096, ge=16)
    outage: float = Field(default=0.01, gt=0, lt=1)
    output: Optional[Path] = None
    preset: Optional[Preset] = None

    @field_validator("entropy_bits", "threshold_s", "duration_s")
    @classmethod
    def check_positive(cls, values: List[float]) -> List[float]:
        if any(not v > 0 for v in values):
            raise ValueError("values must be positive")
        return values

    def coherence_for(self, time_s: float) -> float:
        """Coherence time for a session of `time_s`; slow fading spans the whole session."""
        return self.coherence_time_s if self.coherence_time_s is not None else time_s

    def single_block(self, time_s: float) -> bool:
        return self.coherence_time_s is None or time_s <= self.coherence_time_s * (1 + 1e-12)

    def policies(self, dist: SnrDistribution) -> Dict[str, RatePolicy]:
        """Selected strategies by name, OPRA solved for `dist`."""
        return {
            name: RatePolicy.ora() if name == "ora" else RatePolicy.opra(dist)
            for name in self.policy.names
        }


# =============================================================================
# PRESETS
# =============================================================================

# All presets use B = 20 MHz. fig1 varies H at 6 dB, fig3 varies T at 6 dB,
# fig2 (H = 50 KB) and fig4 (T = 30 ms) vary the average SNR.
PRESETS: Dict[Preset, dict] = {
    Preset.FIG1: {
        "command": Command.DOR_CURVE,
        "snr_db": [6.0],
        "bandwidth_hz": 20e6,
        "entropy": ["50KB", "200KB"],
        "sweep": ("0.1", "1000", 200, True),
    },
    Preset.FIG2: {
        "command": Command.DOR_CURVE,
        "snr_db": [-5.0, 0.0, 6.0, 12.0],
        "bandwidth_hz": 20e6,
        "entropy": ["50KB"],
        "sweep": ("0.1", "1000", 200, True),
    },
    Preset.FIG3: {
        "command": Command.IOR_CURVE,
        "snr_db": [6.0],
        "bandwidth_hz": 20e6,
        "duration_ms": [10.0, 30.0],
        "sweep": ("1bits", "10Mb", 200, True),
    },
    Preset.FIG4: {
        "command": Command.IOR_CURVE,
        "snr_db": [-5.0, 0.0, 6.0, 12.0],
        "bandwidth_hz": 20e6,
        "duration_ms": [30.0],
        "sweep": ("1bits", "10Mb", 200, True),
    },
}
