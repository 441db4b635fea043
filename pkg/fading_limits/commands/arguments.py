"""
Command Arguments

Flag definitions shared by the subcommands and the resolution of parsed
flags, presets and environment defaults into a validated RunConfig.
Precedence: explicit flag > preset > environment > built-in default.
"""

from __future__ import annotations
import argparse
import sys
from pathlib import Path
from typing import Any, Dict, NoReturn, Tuple

from pydantic import ValidationError

from fading_limits.commands.models import (
    PRESETS,
    Command,
    Method,
    Metric,
    PolicyChoice,
    Preset,
    RunConfig,
    parse_entropy,
)
from fading_limits.core.config import config
from fading_limits.core.errors import UsageError

DEFAULTS: Dict[str, Any] = {
    "snr_db": [6.0],
    "bandwidth_hz": 20e6,
    "entropy": ["50KB"],
    "threshold_ms": [10.0],
    "duration_ms": [30.0],
    "policy": PolicyChoice.BOTH.value,
    "method": Method.ANALYTIC.value,
    "metric": Metric.DOR.value,
    "outage": 0.01,
}

# (start, stop, points, log) in the flag units of each command
SWEEP_DEFAULTS: Dict[Command, Tuple[str, str, int, bool]] = {
    Command.DOR_CURVE: ("0.1", "1000", 100, True),
    Command.IOR_CURVE: ("1bits", "10Mb", 100, True),
    Command.CAPACITY: ("-10", "20", 31, False),
}


class UsageArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors as UsageError (exit code 1)."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _seed(raw: str) -> int:
    return int(raw, 0)


# =============================================================================
# FLAG GROUPS
# =============================================================================

def add_snr(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--snr-db", type=float, nargs="+", metavar="DB",
        help="average SNR in dB; several values give one curve each (default: 6)",
    )


def add_bandwidth(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--bandwidth-hz", type=float, metavar="HZ",
        help="channel bandwidth B in Hz (default: 20e6)",
    )


def add_entropy(parser: argparse.ArgumentParser, what: str = "data amount H") -> None:
    parser.add_argument(
        "--entropy", nargs="+", metavar="QTY",
        help=(
            f"{what} as <value><unit>; units bits, Kb (1e3 bits), KB (8e3 bits), "
            "Mb (1e6 bits), MB (8e6 bits); bare numbers are bits (default: 50KB)"
        ),
    )


def add_coherence(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--coherence-ms", type=float, metavar="MS",
        help="coherence time T_c in ms (default: slow fading, one block spans the session)",
    )


def add_threshold(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--threshold-ms", type=float, nargs="+", metavar="MS",
        help="delay threshold T_th in ms (default: 10)",
    )


def add_duration(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--duration-ms", type=float, nargs="+", metavar="MS",
        help="transmission duration T in ms (default: 30)",
    )


def add_policy(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--policy", choices=[p.value for p in PolicyChoice],
        help="transmission strategy (default: both)",
    )


def add_method(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--method", choices=[m.value for m in Method],
        help="columns to compute besides the closed form (default: analytic)",
    )


def add_estimators(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--episodes", type=int, metavar="N",
        help=f"Monte Carlo episodes per point, >= 100 (default: FADING_LIMITS_EPISODES or {config.episodes})",
    )
    parser.add_argument(
        "--seed", type=_seed, metavar="SEED",
        help=f"64-bit master seed, decimal or 0x-hex (default: FADING_LIMITS_SEED or {config.seed})",
    )
    parser.add_argument(
        "--workers", type=int, metavar="N",
        help=f"Monte Carlo worker threads; output does not depend on it (default: {config.workers})",
    )
    parser.add_argument(
        "--conv-bins", type=int, metavar="N",
        help=f"convolution grid cells per single-block 99.999th percentile (default: {config.conv_bins})",
    )


def add_sweep(parser: argparse.ArgumentParser, command: Command, unit: str) -> None:
    start, stop, points, log = SWEEP_DEFAULTS[command]
    parser.add_argument("--sweep-start", metavar="VALUE", help=f"first sweep value in {unit} (default: {start})")
    parser.add_argument("--sweep-stop", metavar="VALUE", help=f"last sweep value in {unit} (default: {stop})")
    parser.add_argument("--grid-points", type=int, metavar="N", help=f"number of sweep points, >= 2 (default: {points})")
    parser.add_argument(
        "--log-sweep", action=argparse.BooleanOptionalAction, default=None,
        help=f"logarithmic sweep spacing (default: {'log' if log else 'linear'})",
    )


def add_preset(parser: argparse.ArgumentParser, command: Command) -> None:
    choices = [p.value for p, values in PRESETS.items() if values["command"] == command]
    parser.add_argument(
        "--preset", choices=choices,
        help="load a figure preset; explicit flags override it",
    )


def add_output(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", type=Path, metavar="PATH", help="write CSV here instead of stdout")


# =============================================================================
# RESOLUTION
# =============================================================================

def _sweep_value(command: Command, text: Any) -> float:
    if command == Command.IOR_CURVE:
        return parse_entropy(text)
    try:
        value = float(text)
    except (TypeError, ValueError):
        raise UsageError(f"sweep bound {text!r} is not a number")
    return value / 1e3 if command == Command.DOR_CURVE else value


def _describe(error: ValidationError) -> str:
    return "; ".join(
        f"{'.'.join(str(part) for part in item['loc'])}: {item['msg']}" for item in error.errors()
    )


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Merge parsed flags with presets and defaults into a RunConfig."""
    command = Command(args.command)
    preset: Dict[str, Any] = {}
    preset_name = getattr(args, "preset", None)
    if preset_name:
        preset = PRESETS[Preset(preset_name)]
        if preset["command"] != command:
            raise UsageError(f"preset {preset_name} is for {preset['command'].value}, not {command.value}")

    def pick(name: str, fallback: Any = None) -> Any:
        value = getattr(args, name, None)
        if value is not None:
            return value
        return preset.get(name, DEFAULTS.get(name, fallback))

    sweep = None
    if command in SWEEP_DEFAULTS:
        start, stop, points, log = preset.get("sweep", SWEEP_DEFAULTS[command])
        sweep = {
            "start": _sweep_value(command, pick("sweep_start", start)),
            "stop": _sweep_value(command, pick("sweep_stop", stop)),
            "points": pick("grid_points", points),
            "log": pick("log_sweep", log),
        }

    coherence_ms = getattr(args, "coherence_ms", None)
    fields = {
        "command": command,
        "snr_db": pick("snr_db"),
        "bandwidth_hz": pick("bandwidth_hz"),
        "entropy_bits": [parse_entropy(text) for text in pick("entropy")],
        "coherence_time_s": None if coherence_ms is None else coherence_ms / 1e3,
        "threshold_s": [ms / 1e3 for ms in pick("threshold_ms")],
        "duration_s": [ms / 1e3 for ms in pick("duration_ms")],
        "policy": pick("policy"),
        "method": pick("method"),
        "metric": pick("metric"),
        "sweep": sweep,
        "n_episodes": pick("episodes", config.episodes),
        "seed": pick("seed", config.seed),
        "workers": pick("workers", config.workers),
        "conv_bins": pick("conv_bins", config.conv_bins),
        "outage": pick("outage"),
        "output": getattr(args, "out", None),
        "preset": preset_name,
    }
    try:
        run_config = RunConfig(**fields)
    except ValidationError as e:
        raise UsageError(_describe(e)) from e

    # capacity sweeps the SNR itself unless explicit values are given
    if command == Command.CAPACITY and getattr(args, "snr_db", None) is None:
        run_config = run_config.model_copy(
            update={"snr_db": [float(v) for v in run_config.sweep.values()]}
        )
    return run_config
