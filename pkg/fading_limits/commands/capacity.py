"""
Capacity Command

Conventional capacity-oriented limits over an SNR sweep: ergodic capacity
of both strategies (adaptive quadrature and closed form) and the outage
capacity at a given outage probability.
"""

from __future__ import annotations
import logging

from fading_limits.commands import arguments
from fading_limits.commands.export import emit, to_csv
from fading_limits.commands.models import Command, RunConfig
from fading_limits.core.channel import SnrDistribution
from fading_limits.core.strategy import Bandwidth, RatePolicy, ergodic_capacity, outage_capacity

logger = logging.getLogger("fading_limits.commands.capacity")

COLUMNS = [
    "snr_db",
    "cutoff_snr",
    "capacity_ora_bps",
    "capacity_opra_bps",
    "capacity_ora_closed_form_bps",
    "capacity_opra_closed_form_bps",
    "outage_probability",
    "outage_capacity_bps",
]


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        Command.CAPACITY.value,
        help="ergodic and outage capacity against the average SNR",
        description=(
            "Sweep the average SNR (or use --snr-db values) and emit ORA/OPRA ergodic "
            "capacity and the outage capacity in bits/s."
        ),
    )
    arguments.add_snr(parser)
    arguments.add_bandwidth(parser)
    arguments.add_sweep(parser, Command.CAPACITY, "dB")
    parser.add_argument(
        "--outage", type=float, metavar="P",
        help="outage probability for the outage capacity, in (0, 1) (default: 0.01)",
    )
    arguments.add_output(parser)
    parser.set_defaults(handler=run)


def run(cfg: RunConfig) -> int:
    b = Bandwidth(cfg.bandwidth_hz)
    ora = RatePolicy.ora()
    rows = []
    for snr_db in cfg.snr_db:
        dist = SnrDistribution.rayleigh(snr_db)
        opra = RatePolicy.opra(dist)
        rows.append({
            "snr_db": snr_db,
            "cutoff_snr": opra.cutoff_snr,
            "capacity_ora_bps": ergodic_capacity(dist, ora, b),
            "capacity_opra_bps": ergodic_capacity(dist, opra, b),
            "capacity_ora_closed_form_bps": ergodic_capacity(dist, ora, b, method="closed_form"),
            "capacity_opra_closed_form_bps": ergodic_capacity(dist, opra, b, method="closed_form"),
            "outage_probability": cfg.outage,
            "outage_capacity_bps": outage_capacity(dist, b, cfg.outage),
        })
    logger.info(f"capacity: {len(rows)} SNR points")
    emit(to_csv(COLUMNS, rows), cfg.output)
    return 0
