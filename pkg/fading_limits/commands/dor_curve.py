"""
DOR Curve Command

Delay outage rate against the delay threshold T_th, one curve per
(average SNR, data amount) pair. The closed form is filled where T_th fits
inside one coherence block; convolution and Monte Carlo columns cover any
threshold.
"""

from __future__ import annotations
import logging
from typing import List

from fading_limits.commands import arguments
from fading_limits.commands.export import emit, to_csv
from fading_limits.commands.models import Command, RunConfig
from fading_limits.core.analytic import TransmissionSpec, dor_single_block
from fading_limits.core.channel import SnrDistribution
from fading_limits.core.montecarlo import estimate_dor
from fading_limits.core.multiblock import dor_from_met
from fading_limits.core.strategy import Bandwidth

logger = logging.getLogger("fading_limits.commands.dor_curve")


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        Command.DOR_CURVE.value,
        help="delay outage rate against the delay threshold",
        description="Sweep the delay threshold T_th and emit DOR per strategy as CSV.",
    )
    arguments.add_preset(parser, Command.DOR_CURVE)
    arguments.add_snr(parser)
    arguments.add_bandwidth(parser)
    arguments.add_entropy(parser)
    arguments.add_coherence(parser)
    arguments.add_policy(parser)
    arguments.add_method(parser)
    arguments.add_sweep(parser, Command.DOR_CURVE, "ms")
    arguments.add_estimators(parser)
    arguments.add_output(parser)
    parser.set_defaults(handler=run)


def columns(cfg: RunConfig) -> List[str]:
    names = ["snr_db", "entropy_bits", "threshold_s"]
    for policy in cfg.policy.names:
        names.append(f"dor_{policy}_analytic")
        if cfg.method.convolution:
            names.append(f"dor_{policy}_convolution")
        if cfg.method.montecarlo:
            names += [f"dor_{policy}_mc", f"dor_{policy}_mc_stderr"]
    return names


def run(cfg: RunConfig) -> int:
    b = Bandwidth(cfg.bandwidth_hz)
    thresholds = [float(t) for t in cfg.sweep.values()]
    outside = sum(not cfg.single_block(t) for t in thresholds)
    if outside:
        logger.warning(
            f"{outside} of {len(thresholds)} thresholds exceed the coherence time; "
            f"analytic columns are left empty there (use --method convolution)"
        )

    rows = []
    for snr_db in cfg.snr_db:
        dist = SnrDistribution.rayleigh(snr_db)
        policies = cfg.policies(dist)
        for bits in cfg.entropy_bits:
            logger.info(f"dor-curve: {dist.describe()} H={bits:g} bits, {len(thresholds)} points")
            for t_th in thresholds:
                spec = TransmissionSpec(bits, b, cfg.coherence_for(t_th))
                row = {"snr_db": snr_db, "entropy_bits": bits, "threshold_s": t_th}
                for name, policy in policies.items():
                    row[f"dor_{name}_analytic"] = (
                        dor_single_block(spec, t_th, dist, policy) if cfg.single_block(t_th) else None
                    )
                    if cfg.method.convolution:
                        row[f"dor_{name}_convolution"] = dor_from_met(
                            spec, t_th, dist, policy, bins=cfg.conv_bins
                        )
                    if cfg.method.montecarlo:
                        estimate = estimate_dor(
                            spec, t_th, policy, dist, cfg.n_episodes, cfg.seed, workers=cfg.workers
                        )
                        row[f"dor_{name}_mc"] = estimate.probability
                        row[f"dor_{name}_mc_stderr"] = estimate.std_error
                rows.append(row)

    emit(to_csv(columns(cfg), rows), cfg.output)
    return 0
