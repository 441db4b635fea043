"""
Crossover Command

Where ORA and OPRA swap places for single-block sessions: the delay
threshold T* below which OPRA has the lower DOR, the entropy threshold H*
above which OPRA has the lower IOR, and the strategy a session of the given
duration should use.
"""

from __future__ import annotations
import logging

from fading_limits.commands import arguments
from fading_limits.commands.export import emit, to_csv
from fading_limits.commands.models import Command, RunConfig
from fading_limits.core.analytic import (
    TransmissionSpec,
    crossover_exponent,
    dor_crossover_threshold,
    ior_crossover_entropy,
    preferred_policy,
)
from fading_limits.core.channel import SnrDistribution
from fading_limits.core.strategy import Bandwidth, RatePolicy

logger = logging.getLogger("fading_limits.commands.crossover")

COLUMNS = [
    "snr_db",
    "cutoff_snr",
    "crossover_exponent",
    "entropy_bits",
    "dor_crossover_threshold_s",
    "duration_s",
    "ior_crossover_entropy_bits",
    "preferred_policy",
]


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        Command.CROSSOVER.value,
        help="ORA/OPRA crossover thresholds",
        description=(
            "Report T* (DOR crossover delay threshold, s) and H* (IOR crossover entropy "
            "threshold, bits), and the preferred strategy when --duration-ms is the deadline."
        ),
    )
    arguments.add_snr(parser)
    arguments.add_bandwidth(parser)
    arguments.add_entropy(parser)
    arguments.add_duration(parser)
    arguments.add_output(parser)
    parser.set_defaults(handler=run)


def run(cfg: RunConfig) -> int:
    b = Bandwidth(cfg.bandwidth_hz)
    rows = []
    for snr_db in cfg.snr_db:
        dist = SnrDistribution.rayleigh(snr_db)
        opra = RatePolicy.opra(dist)
        exponent = crossover_exponent(opra)
        for bits in cfg.entropy_bits:
            for duration in cfg.duration_s:
                spec = TransmissionSpec(bits, b, duration)
                rows.append({
                    "snr_db": snr_db,
                    "cutoff_snr": opra.cutoff_snr,
                    "crossover_exponent": exponent,
                    "entropy_bits": bits,
                    "dor_crossover_threshold_s": dor_crossover_threshold(spec, opra),
                    "duration_s": duration,
                    "ior_crossover_entropy_bits": ior_crossover_entropy(duration, b, opra),
                    "preferred_policy": preferred_policy(spec, duration, dist, opra).name,
                })
    emit(to_csv(COLUMNS, rows), cfg.output)
    return 0
