"""
Command-Line Interface

Builds the subcommand parser and dispatches. Every failure the toolkit
raises on purpose maps to its exit code: 0 success, 1 usage, 2 numerical,
3 Monte Carlo disagreement.
"""

from __future__ import annotations
import argparse
import logging
import sys
from typing import List, Optional

from fading_limits import __version__
from fading_limits.commands.arguments import UsageArgumentParser, resolve_config
from fading_limits.commands.capacity import register as register_capacity
from fading_limits.commands.crossover import register as register_crossover
from fading_limits.commands.dor_curve import register as register_dor_curve
from fading_limits.commands.ior_curve import register as register_ior_curve
from fading_limits.commands.simulate import register as register_simulate
from fading_limits.commands.threshold import register as register_threshold
from fading_limits.core.errors import FadingLimitsError, NumericalError

logger = logging.getLogger("fading_limits.cli")


def build_parser() -> argparse.ArgumentParser:
    parser = UsageArgumentParser(
        prog="fading-limits",
        description=(
            "Delay and information outage of ORA/OPRA transmission over Rayleigh block fading. "
            "Results are CSV on stdout (or --out); logs go to stderr. "
            "Environment: FADING_LIMITS_SEED, FADING_LIMITS_EPISODES, FADING_LIMITS_WORKERS, "
            "FADING_LIMITS_CONV_BINS, FADING_LIMITS_LOG_LEVEL."
        ),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    register_threshold(subparsers)
    register_dor_curve(subparsers)
    register_ior_curve(subparsers)
    register_simulate(subparsers)
    register_capacity(subparsers)
    register_crossover(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = resolve_config(args)
        logger.info(f"running {cfg.command.value} (seed={cfg.seed}, workers={cfg.workers})")
        return args.handler(cfg)
    except SystemExit as e:
        # --help and --version
        return e.code if isinstance(e.code, int) else 0
    except FadingLimitsError as e:
        logger.error(f"{type(e).__name__}: {e.detail}")
        print(f"error: {e.detail}", file=sys.stderr)
        return e.exit_code
    except ArithmeticError as e:
        logger.error(f"numerical failure: {e}")
        print(f"error: {e}", file=sys.stderr)
        return NumericalError.exit_code
