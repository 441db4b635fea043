"""
Lattice convolution engine for sessions spanning several coherence blocks.

Oracle runs against 10^6-episode Monte Carlo are marked slow.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from fading_limits.core.analytic import TransmissionSpec, dor_single_block, ior_single_block
from fading_limits.core.channel import SnrDistribution
from fading_limits.core.errors import DomainError, NumericalError, UnsupportedOperationError
from fading_limits.core.montecarlo import agreement, estimate_dor, estimate_ior
from fading_limits.core.multiblock import (
    EntropyDistribution,
    block_tail_mass,
    convolve,
    default_grid_step,
    dor_from_met,
    dor_multiblock,
    ior_multiblock,
    met_distribution,
    per_block_entropy_distribution,
    split_duration,
)
from fading_limits.core.strategy import Bandwidth, RatePolicy, ergodic_capacity

B = Bandwidth(2e7)
SEED = 20180901


def _block(dist, policy, t_c=1e-2, bins=4096):
    step = default_grid_step(dist, policy, t_c, B, bins)
    return per_block_entropy_distribution(dist, policy, t_c, B, step)


# ── EntropyDistribution ──────────────────────────────────────────────────────

def test_entropy_distribution_validates():
    with pytest.raises(DomainError):
        EntropyDistribution(atom_at_zero=1.5, grid_step_bits=1.0, density=np.zeros(3))
    with pytest.raises(DomainError):
        EntropyDistribution(atom_at_zero=0.0, grid_step_bits=0.0, density=np.zeros(3))
    with pytest.raises(DomainError):
        EntropyDistribution(atom_at_zero=0.0, grid_step_bits=1.0, density=np.array([0.5, -0.1]))
    with pytest.raises(DomainError):
        EntropyDistribution(atom_at_zero=0.0, grid_step_bits=1.0, density=np.array([]))


def test_density_is_read_only(channel_6db, ora):
    block = _block(channel_6db, ora)
    with pytest.raises(ValueError):
        block.density[0] = 1.0


def test_point_mass_convolution():
    block = EntropyDistribution.point_mass(10.0, 1.0)
    total = convolve(block, 4)
    assert total.masses[40] == pytest.approx(1.0, abs=1e-12)
    assert total.cdf(39.4) == pytest.approx(0.0, abs=1e-12)
    assert total.cdf(40.6) == pytest.approx(1.0, abs=1e-12)
    assert total.mean() == pytest.approx(40.0, rel=1e-12)
    assert total.variance() == pytest.approx(0.0, abs=1e-9)


def test_convolve_once_is_identity(channel_6db, ora):
    block = _block(channel_6db, ora)
    assert convolve(block, 1) is block


def test_convolve_validates():
    block = EntropyDistribution.point_mass(3.0, 1.0)
    with pytest.raises(DomainError):
        convolve(block, 0)
    with pytest.raises(DomainError):
        convolve(block, 1.5)
    with pytest.raises(DomainError):
        block.convolve_with(EntropyDistribution.point_mass(3.0, 2.0))


def test_lost_mass_limit_is_enforced():
    leaky = EntropyDistribution(
        atom_at_zero=0.0, grid_step_bits=1.0, density=np.array([0.0, 1.0 - 6e-7]), lost_mass=6e-7
    )
    with pytest.raises(NumericalError):
        leaky.convolve_with(leaky)


# ── Per-block distribution ───────────────────────────────────────────────────

@pytest.mark.parametrize("policy_name", ["ora", "opra"])
def test_per_block_mass_accounts_for_everything(channel_6db, opra_6db, policy_name):
    policy = RatePolicy.ora() if policy_name == "ora" else opra_6db
    block = _block(channel_6db, policy)
    assert block.total_mass() + block.lost_mass == pytest.approx(1.0, abs=1e-12)
    assert block.lost_mass <= 1e-8


def test_opra_atom_is_the_silence_probability(channel_6db, opra_6db):
    block = _block(channel_6db, opra_6db)
    assert block.atom_at_zero == pytest.approx(1.0 - math.exp(-opra_6db.cutoff_snr / channel_6db.mean()), rel=1e-14)
    assert _block(channel_6db, RatePolicy.ora()).atom_at_zero == 0.0


@pytest.mark.parametrize("policy_name", ["ora", "opra"])
def test_per_block_mean_matches_capacity(channel_6db, opra_6db, policy_name):
    policy = RatePolicy.ora() if policy_name == "ora" else opra_6db
    block = _block(channel_6db, policy)
    expected = 1e-2 * ergodic_capacity(channel_6db, policy, B)
    assert block.mean() == pytest.approx(expected, rel=1e-3)


def test_cdf_is_monotone(channel_6db, opra_6db):
    total = convolve(_block(channel_6db, opra_6db), 3)
    points = np.linspace(0.0, total.s_max * 1.1, 997)
    values = [total.cdf(x) for x in points]
    assert values[0] == 0.0
    assert all(b >= a for a, b in zip(values, values[1:]))
    assert values[-1] == pytest.approx(1.0, abs=1e-6)


def test_degenerate_channel_is_unsupported():
    with pytest.raises(UnsupportedOperationError):
        default_grid_step(SnrDistribution.degenerate(3.0), RatePolicy.ora(), 1e-2, B)


def test_sum_mean_is_additive(channel_6db, ora):
    block = _block(channel_6db, ora)
    assert convolve(block, 8).mean() == pytest.approx(8.0 * block.mean(), rel=1e-6)
    assert convolve(block, 5).variance() == pytest.approx(5.0 * block.variance(), rel=1e-6)


# ── Multi-block DOR / IOR ────────────────────────────────────────────────────

@pytest.mark.parametrize("policy_name", ["ora", "opra"])
def test_one_block_matches_closed_form(channel_6db, opra_6db, policy_name):
    policy = RatePolicy.ora() if policy_name == "ora" else opra_6db
    for t_c in (5e-3, 1e-2, 2e-2):
        spec = TransmissionSpec(4e5, B, t_c)
        assert dor_multiblock(spec, 1, channel_6db, policy) == pytest.approx(
            dor_single_block(spec, t_c, channel_6db, policy), abs=1e-4
        )


def test_tiny_entropy_limits(channel_6db, opra_6db):
    spec = TransmissionSpec(1e-6, B, 1e-2)
    assert dor_multiblock(spec, 4, channel_6db, RatePolicy.ora()) == pytest.approx(0.0, abs=1e-9)
    atom = 1.0 - math.exp(-opra_6db.cutoff_snr / channel_6db.mean())
    for blocks in (1, 2, 4):
        assert dor_multiblock(spec, blocks, channel_6db, opra_6db) == pytest.approx(atom**blocks, abs=1e-9)


@pytest.mark.parametrize("blocks", [2, 4, 8])
def test_grid_halving_changes_little(channel_6db, opra_6db, blocks):
    spec = TransmissionSpec(4e5, B, 2e-3)
    for policy in (RatePolicy.ora(), opra_6db):
        step = default_grid_step(channel_6db, policy, spec.coherence_time_s, B)
        coarse = dor_multiblock(spec, blocks, channel_6db, policy, grid_step=step)
        fine = dor_multiblock(spec, blocks, channel_6db, policy, grid_step=step / 2)
        assert abs(coarse - fine) < 1e-3


def test_dor_falls_with_more_blocks(channel_6db, ora):
    # same H over a longer deadline
    spec = TransmissionSpec(4e5, B, 2e-3)
    values = [dor_multiblock(spec, blocks, channel_6db, ora) for blocks in (2, 4, 8, 16)]
    assert all(b < a for a, b in zip(values, values[1:]))


def test_split_duration_snaps_block_edges():
    assert split_duration(0.03, 0.01) == (3, 0.0)
    n, remainder = split_duration(0.035, 0.01)
    assert n == 3 and remainder == pytest.approx(0.005)
    assert split_duration(0.004, 0.01) == (0, 0.004)


def test_partial_block_matches_closed_form(channel_6db, opra_6db):
    t_c = 30e-3
    for policy in (RatePolicy.ora(), opra_6db):
        for h_th in (1e5, 4.5e5, 1e6):
            assert ior_multiblock(h_th, t_c / 2, t_c, channel_6db, policy, B) == pytest.approx(
                ior_single_block(h_th, t_c / 2, B, channel_6db, policy), abs=1e-4
            )


def test_ior_small_threshold(channel_6db, ora):
    assert ior_multiblock(1e-6, 35e-3, 10e-3, channel_6db, ora, B) == pytest.approx(0.0, abs=1e-9)


def test_met_distribution_mean_matches_ergodic_capacity(channel_6db, ora):
    t_c = 10e-3
    total = met_distribution(3.5 * t_c, t_c, channel_6db, ora, B)
    expected = 3.5 * t_c * ergodic_capacity(channel_6db, ora, B)
    assert total.mean() == pytest.approx(expected, rel=5e-3)


def test_dor_from_met_agrees_with_block_lattice(channel_6db, ora):
    spec = TransmissionSpec(4e5, B, 2e-3)
    assert dor_from_met(spec, 8 * 2e-3, channel_6db, ora) == pytest.approx(
        dor_multiblock(spec, 8, channel_6db, ora), abs=1e-6
    )


def test_dor_is_nondecreasing_in_entropy(channel_6db, opra_6db):
    for policy in (RatePolicy.ora(), opra_6db):
        values = [
            dor_multiblock(TransmissionSpec(float(h), B, 2e-3), 4, channel_6db, policy)
            for h in np.linspace(1e3, 1e6, 40)
        ]
        assert all(b >= a for a, b in zip(values, values[1:]))
        assert values[0] < 0.01 and values[-1] > 0.99


# ── Long sessions ────────────────────────────────────────────────────────────

def test_block_tail_mass_shrinks_with_blocks():
    assert block_tail_mass(1) == 1e-9
    assert block_tail_mass(2000) == pytest.approx(5e-11)
    counts = (1, 10, 100, 101, 1000, 2000, 10**5)
    values = [block_tail_mass(n) for n in counts]
    assert all(b <= a for a, b in zip(values, values[1:]))
    assert all(n * v <= 1e-7 * (1.0 + 1e-9) for n, v in zip(counts, values))


def test_two_thousand_block_session(channel_6db, ora):
    t_c = 0.5e-3
    total = met_distribution(1.0, t_c, channel_6db, ora, B)
    assert total.lost_mass <= 1e-6
    assert total.mean() == pytest.approx(ergodic_capacity(channel_6db, ora, B), rel=1e-3)

    spec = TransmissionSpec(4e7, B, t_c)
    value = dor_from_met(spec, 1.0, channel_6db, ora)
    assert 0.5 < value < 1.0
    assert value == pytest.approx(dor_multiblock(spec, 2000, channel_6db, ora), abs=1e-6)


# ── Monte Carlo oracle ───────────────────────────────────────────────────────

@pytest.mark.slow
@pytest.mark.parametrize("blocks", [2, 4, 8])
def test_multiblock_dor_matches_monte_carlo(channel_6db, opra_6db, blocks):
    spec = TransmissionSpec(4e5, B, 2e-3)
    for policy in (RatePolicy.ora(), opra_6db):
        reference = dor_multiblock(spec, blocks, channel_6db, policy)
        estimate = estimate_dor(spec, blocks * 2e-3, policy, channel_6db, 10**6, SEED)
        assert agreement(estimate, reference, sigmas=3.0).ok, (
            f"L={blocks} {policy.name}: mc={estimate.probability:.6f} conv={reference:.6f}"
        )


@pytest.mark.slow
def test_partial_block_ior_matches_monte_carlo(channel_6db, ora):
    t_c = 10e-3
    reference = ior_multiblock(1.2e6, 3.5 * t_c, t_c, channel_6db, ora, B)
    estimate = estimate_ior(1.2e6, 3.5 * t_c, t_c, ora, channel_6db, B, 10**6, SEED)
    assert agreement(estimate, reference, sigmas=3.0).ok


@pytest.mark.slow
@pytest.mark.parametrize("snr_db", [0.0, 6.0, 12.0])
@pytest.mark.parametrize("policy_name", ["ora", "opra"])
def test_closed_form_convolution_and_monte_carlo_agree(snr_db, policy_name):
    dist = SnrDistribution.rayleigh(snr_db)
    policy = RatePolicy.ora() if policy_name == "ora" else RatePolicy.opra(dist)
    t_c = 2e-3
    capacity = ergodic_capacity(dist, policy, B)

    one_block = TransmissionSpec(t_c * capacity, B, t_c)
    assert dor_multiblock(one_block, 1, dist, policy) == pytest.approx(
        dor_single_block(one_block, t_c, dist, policy), abs=1e-4
    )

    passed = total = 0
    for blocks in (1, 2, 4, 8):
        # H at the mean delivery keeps the DOR away from 0 and 1
        spec = TransmissionSpec(blocks * t_c * capacity, B, t_c)
        reference = dor_multiblock(spec, blocks, dist, policy)
        estimate = estimate_dor(spec, blocks * t_c, policy, dist, 10**6, SEED)
        total += 1
        passed += agreement(estimate, reference, sigmas=3.0).ok
    assert passed >= total - 1
