"""
Threshold Command

Solves the OPRA water-filling cutoff γ_T for each average SNR and reports
the residual reached, the average transmit power and the probability that
OPRA stays silent in a block.
"""

from __future__ import annotations
import logging
import math

from fading_limits.commands import arguments
from fading_limits.commands.export import emit, to_csv
from fading_limits.commands.models import Command, RunConfig
from fading_limits.core.channel import SnrDistribution
from fading_limits.core.strategy import (
    RatePolicy,
    average_power,
    no_transmission_probability,
    waterfilling_residual,
)

logger = logging.getLogger("fading_limits.commands.threshold")

COLUMNS = [
    "snr_db",
    "mean_snr",
    "cutoff_snr",
    "cutoff_snr_db",
    "residual",
    "average_power",
    "no_transmission_probability",
]


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        Command.THRESHOLD.value,
        help="solve the OPRA water-filling cutoff",
        description="Solve the OPRA cutoff SNR γ_T under the unit average power constraint.",
    )
    arguments.add_snr(parser)
    arguments.add_output(parser)
    parser.set_defaults(handler=run)


def run(cfg: RunConfig) -> int:
    rows = []
    for snr_db in cfg.snr_db:
        dist = SnrDistribution.rayleigh(snr_db)
        opra = RatePolicy.opra(dist)
        gamma_t = opra.cutoff_snr
        rows.append({
            "snr_db": snr_db,
            "mean_snr": dist.mean(),
            "cutoff_snr": gamma_t,
            "cutoff_snr_db": 10.0 * math.log10(gamma_t),
            "residual": waterfilling_residual(gamma_t, dist),
            "average_power": average_power(dist, opra),
            "no_transmission_probability": no_transmission_probability(dist, opra),
        })
        logger.info(f"{dist.describe()}: γ_T={gamma_t:.12g}")
    emit(to_csv(COLUMNS, rows), cfg.output)
    return 0
