"""Rayleigh and degenerate SNR laws."""

from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import integrate, stats

from fading_limits.core.channel import AverageSnr, SnrDistribution
from fading_limits.core.errors import DomainError, UnsupportedOperationError

MEAN_6DB = 10.0 ** 0.6


# ── Average SNR ──────────────────────────────────────────────────────────────

def test_average_snr_db_and_linear_agree():
    snr = AverageSnr.from_db(6.0)
    assert snr.linear == pytest.approx(3.9810717055349722, rel=1e-14)
    assert AverageSnr.from_linear(snr.linear).db == pytest.approx(6.0, abs=1e-12)


def test_average_snr_rejects_inconsistent_or_invalid_values():
    with pytest.raises(DomainError):
        AverageSnr(db=6.0, linear=4.0)
    with pytest.raises(DomainError):
        AverageSnr.from_linear(0.0)
    with pytest.raises(DomainError):
        AverageSnr.from_db(float("inf"))
    with pytest.raises(DomainError):
        AverageSnr.from_db(float("nan"))
    with pytest.raises(ValueError):
        AverageSnr.from_linear(-1.0)


# ── Density, cdf, quantile ───────────────────────────────────────────────────

def test_pdf_values():
    assert SnrDistribution.rayleigh_linear(1.0).pdf(0.0) == pytest.approx(1.0)
    dist = SnrDistribution.rayleigh(6.0)
    assert dist.pdf(MEAN_6DB) == pytest.approx(math.exp(-1.0) / MEAN_6DB, rel=1e-12)
    assert dist.pdf(1e4) == pytest.approx(0.0, abs=1e-300)


def test_pdf_rejects_negative_snr_and_degenerate_law():
    with pytest.raises(DomainError):
        SnrDistribution.rayleigh(6.0).pdf(-0.1)
    with pytest.raises(UnsupportedOperationError):
        SnrDistribution.degenerate(5.0).pdf(5.0)
    with pytest.raises(NotImplementedError):
        SnrDistribution.degenerate(5.0).pdf(1.0)


def test_cdf_values():
    dist = SnrDistribution.rayleigh(6.0)
    assert dist.cdf(0.0) == 0.0
    assert dist.cdf(-2.0) == 0.0
    assert dist.cdf(3.0) == pytest.approx(1.0 - math.exp(-3.0 / MEAN_6DB), rel=1e-14)
    assert dist.cdf(math.inf) == 1.0


def test_cdf_is_vectorized_and_monotone():
    x = np.linspace(0.0, 40.0, 401)
    values = SnrDistribution.rayleigh(6.0).cdf(x)
    assert values.shape == x.shape
    assert np.all(np.diff(values) >= 0.0)


@pytest.mark.parametrize("snr_db", [-10.0, -5.0, 0.0, 6.0, 12.0, 20.0])
def test_pdf_integrates_to_one(snr_db):
    dist = SnrDistribution.rayleigh(snr_db)
    total, _ = integrate.quad(dist.pdf, 0.0, np.inf, epsabs=1e-13, epsrel=1e-12)
    assert abs(total - 1.0) < 1e-9


@pytest.mark.parametrize("snr_db", [-10.0, 0.0, 6.0, 20.0])
def test_cdf_is_the_integrated_pdf(snr_db):
    dist = SnrDistribution.rayleigh(snr_db)
    for p in (1e-6, 0.1, 0.5, 0.9, 0.999999):
        x = float(dist.quantile(p))
        area, _ = integrate.quad(dist.pdf, 0.0, x, epsabs=1e-14, epsrel=1e-13)
        assert abs(dist.cdf(x) - area) < 1e-9


def test_degenerate_cdf_is_a_step():
    dist = SnrDistribution.degenerate(5.0)
    assert dist.cdf(4.0) == 0.0
    assert dist.cdf(5.0) == 1.0
    assert dist.cdf(6.0) == 1.0


def test_quantile_inverts_cdf():
    dist = SnrDistribution.rayleigh_linear(2.0)
    assert dist.quantile(0.0) == 0.0
    assert dist.quantile(1.0 - math.exp(-1.0)) == pytest.approx(2.0, rel=1e-14)
    p = np.array([1e-9, 0.01, 0.5, 0.99, 1.0 - 1e-9])
    np.testing.assert_allclose(dist.cdf(dist.quantile(p)), p, rtol=1e-9)
    assert SnrDistribution.degenerate(5.0).quantile(0.3) == 5.0


@pytest.mark.parametrize("p", [-0.1, 1.0, 1.5])
def test_quantile_rejects_out_of_range(p):
    with pytest.raises(DomainError):
        SnrDistribution.rayleigh(6.0).quantile(p)


# ── Sampling ─────────────────────────────────────────────────────────────────

def test_degenerate_samples_are_constant():
    np.testing.assert_array_equal(SnrDistribution.degenerate(5.0).sample_sequence(3, seed=123), [5.0, 5.0, 5.0])


def test_samples_are_reproducible():
    dist = SnrDistribution.rayleigh(6.0)
    np.testing.assert_array_equal(dist.sample_sequence(1000, seed=42), dist.sample_sequence(1000, seed=42))
    assert not np.array_equal(dist.sample_sequence(1000, seed=42), dist.sample_sequence(1000, seed=43))


def test_sample_mean_matches_configured_mean():
    samples = SnrDistribution.rayleigh(6.0).sample_sequence(10**6, seed=42)
    assert 3.94 <= samples.mean() <= 4.02


def test_samples_follow_exponential_law():
    dist = SnrDistribution.rayleigh(6.0)
    samples = dist.sample_sequence(20_000, seed=2018)
    result = stats.kstest(samples, "expon", args=(0.0, MEAN_6DB))
    assert result.pvalue > 1e-3


def test_million_samples_pass_kolmogorov_smirnov():
    dist = SnrDistribution.rayleigh(6.0)
    result = stats.kstest(dist.sample_sequence(10**6, seed=2018), dist.cdf)
    assert result.statistic < 0.002


def test_sample_sequence_validates_arguments():
    dist = SnrDistribution.rayleigh(6.0)
    with pytest.raises(DomainError):
        dist.sample_sequence(0, seed=1)
    with pytest.raises(DomainError):
        dist.sample_sequence(10, seed=-1)
    with pytest.raises(DomainError):
        dist.sample_sequence(10, seed=2**64)


def test_mean_and_describe():
    assert SnrDistribution.rayleigh(6.0).mean() == pytest.approx(MEAN_6DB)
    assert SnrDistribution.degenerate(2.5).mean() == 2.5
    assert "6 dB" in SnrDistribution.rayleigh(6.0).describe()
