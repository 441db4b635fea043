"""Shared fixtures: the 6 dB Rayleigh channel, both strategies, a 50 KB session at 20 MHz."""

from __future__ import annotations

import os
import sys

_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, _ROOT)

import pytest

from fading_limits.core.analytic import TransmissionSpec
from fading_limits.core.channel import SnrDistribution
from fading_limits.core.strategy import Bandwidth, RatePolicy

MEAN_SNR_6DB = 10.0 ** 0.6
FIFTY_KB_BITS = 4.0e5


@pytest.fixture
def channel_6db() -> SnrDistribution:
    return SnrDistribution.rayleigh(6.0)


@pytest.fixture
def bandwidth() -> Bandwidth:
    return Bandwidth(20e6)


@pytest.fixture
def ora() -> RatePolicy:
    return RatePolicy.ora()


@pytest.fixture
def opra_6db(channel_6db) -> RatePolicy:
    return RatePolicy.opra(channel_6db)


@pytest.fixture
def session_50kb(bandwidth) -> TransmissionSpec:
    """H = 50 KB, one 10 ms coherence block."""
    return TransmissionSpec(FIFTY_KB_BITS, bandwidth, 10e-3)
