"""
IOR Curve Command

Information outage rate against the entropy threshold H_th, one curve per
(average SNR, duration) pair.
"""

from __future__ import annotations
import logging
from typing import List

from fading_limits.commands import arguments
from fading_limits.commands.export import emit, to_csv
from fading_limits.commands.models import Command, RunConfig
from fading_limits.core.analytic import ior_single_block
from fading_limits.core.channel import SnrDistribution
from fading_limits.core.montecarlo import estimate_ior
from fading_limits.core.multiblock import met_distribution
from fading_limits.core.strategy import Bandwidth

logger = logging.getLogger("fading_limits.commands.ior_curve")


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        Command.IOR_CURVE.value,
        help="information outage rate against the entropy threshold",
        description="Sweep the entropy threshold H_th and emit IOR per strategy as CSV.",
    )
    arguments.add_preset(parser, Command.IOR_CURVE)
    arguments.add_snr(parser)
    arguments.add_bandwidth(parser)
    arguments.add_duration(parser)
    arguments.add_coherence(parser)
    arguments.add_policy(parser)
    arguments.add_method(parser)
    arguments.add_sweep(parser, Command.IOR_CURVE, "entropy units such as 1Kb or 2MB")
    arguments.add_estimators(parser)
    arguments.add_output(parser)
    parser.set_defaults(handler=run)


def columns(cfg: RunConfig) -> List[str]:
    names = ["snr_db", "duration_s", "entropy_threshold_bits"]
    for policy in cfg.policy.names:
        names.append(f"ior_{policy}_analytic")
        if cfg.method.convolution:
            names.append(f"ior_{policy}_convolution")
        if cfg.method.montecarlo:
            names += [f"ior_{policy}_mc", f"ior_{policy}_mc_stderr"]
    return names


def run(cfg: RunConfig) -> int:
    b = Bandwidth(cfg.bandwidth_hz)
    thresholds = [float(h) for h in cfg.sweep.values()]

    rows = []
    for snr_db in cfg.snr_db:
        dist = SnrDistribution.rayleigh(snr_db)
        policies = cfg.policies(dist)
        for duration in cfg.duration_s:
            t_c = cfg.coherence_for(duration)
            single = cfg.single_block(duration)
            if not single:
                logger.warning(
                    f"duration {duration:g} s exceeds the coherence time; analytic columns left empty"
                )
            sums = {}
            if cfg.method.convolution:
                sums = {
                    name: met_distribution(duration, t_c, dist, policy, b, bins=cfg.conv_bins)
                    for name, policy in policies.items()
                }
            logger.info(f"ior-curve: {dist.describe()} T={duration:g} s, {len(thresholds)} points")

            for h_th in thresholds:
                row = {"snr_db": snr_db, "duration_s": duration, "entropy_threshold_bits": h_th}
                for name, policy in policies.items():
                    row[f"ior_{name}_analytic"] = (
                        ior_single_block(h_th, duration, b, dist, policy) if single else None
                    )
                    if cfg.method.convolution:
                        row[f"ior_{name}_convolution"] = sums[name].cdf(h_th)
                    if cfg.method.montecarlo:
                        estimate = estimate_ior(
                            h_th, duration, t_c, policy, dist, b,
                            cfg.n_episodes, cfg.seed, workers=cfg.workers,
                        )
                        row[f"ior_{name}_mc"] = estimate.probability
                        row[f"ior_{name}_mc_stderr"] = estimate.std_error
                rows.append(row)

    emit(to_csv(columns(cfg), rows), cfg.output)
    return 0
