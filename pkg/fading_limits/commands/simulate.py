"""
Simulate Command

Self-validating Monte Carlo run. Each estimate is printed next to the
closed form (single-block sessions) and the convolution engine (any
session); the run fails with exit code 3 when an estimate lands more than
4 standard errors from its reference.
"""

from __future__ import annotations
import logging
import sys
from typing import List

from fading_limits.commands import arguments
from fading_limits.commands.export import emit, to_csv
from fading_limits.commands.models import Command, Metric, RunConfig
from fading_limits.core.analytic import TransmissionSpec, dor_single_block, ior_single_block
from fading_limits.core.channel import SnrDistribution
from fading_limits.core.errors import OracleDisagreementError
from fading_limits.core.montecarlo import agreement, estimate_dor, estimate_ior
from fading_limits.core.multiblock import dor_from_met, ior_multiblock
from fading_limits.core.strategy import Bandwidth

logger = logging.getLogger("fading_limits.commands.simulate")

AGREEMENT_SIGMAS = 4.0

COLUMNS = [
    "metric",
    "policy",
    "snr_db",
    "entropy_bits",
    "time_s",
    "coherence_time_s",
    "probability",
    "n_episodes",
    "std_error",
    "ci95_low",
    "ci95_high",
    "master_seed",
    "analytic",
    "convolution",
    "reference",
    "z_score",
    "agreement",
]


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        Command.SIMULATE.value,
        help="Monte Carlo estimate checked against the deterministic engines",
        description=(
            "Estimate DOR or IOR by Monte Carlo and compare with the closed form or the "
            "convolution engine. Exit code 3 when they disagree beyond 4 standard errors."
        ),
    )
    parser.add_argument(
        "--metric", choices=[m.value for m in Metric],
        help="dor uses --entropy and --threshold-ms; ior uses --entropy as H_th and --duration-ms (default: dor)",
    )
    arguments.add_snr(parser)
    arguments.add_bandwidth(parser)
    arguments.add_entropy(parser, what="data amount H (dor) or entropy threshold H_th (ior)")
    arguments.add_coherence(parser)
    arguments.add_threshold(parser)
    arguments.add_duration(parser)
    arguments.add_policy(parser)
    arguments.add_estimators(parser)
    arguments.add_output(parser)
    parser.set_defaults(handler=run)


def run(cfg: RunConfig) -> int:
    b = Bandwidth(cfg.bandwidth_hz)
    times = cfg.threshold_s if cfg.metric == Metric.DOR else cfg.duration_s

    rows = []
    failures: List[str] = []
    for snr_db in cfg.snr_db:
        dist = SnrDistribution.rayleigh(snr_db)
        policies = cfg.policies(dist)
        for bits in cfg.entropy_bits:
            for time_s in times:
                t_c = cfg.coherence_for(time_s)
                single = cfg.single_block(time_s)
                for name, policy in policies.items():
                    if cfg.metric == Metric.DOR:
                        spec = TransmissionSpec(bits, b, t_c)
                        estimate = estimate_dor(
                            spec, time_s, policy, dist, cfg.n_episodes, cfg.seed, workers=cfg.workers
                        )
                        analytic = dor_single_block(spec, time_s, dist, policy) if single else None
                        convolution = dor_from_met(spec, time_s, dist, policy, bins=cfg.conv_bins)
                    else:
                        estimate = estimate_ior(
                            bits, time_s, t_c, policy, dist, b,
                            cfg.n_episodes, cfg.seed, workers=cfg.workers,
                        )
                        analytic = ior_single_block(bits, time_s, b, dist, policy) if single else None
                        convolution = ior_multiblock(
                            bits, time_s, t_c, dist, policy, b, bins=cfg.conv_bins
                        )

                    reference = analytic if analytic is not None else convolution
                    check = agreement(estimate, reference, sigmas=AGREEMENT_SIGMAS)
                    rows.append({
                        "metric": cfg.metric.value,
                        "policy": name,
                        "snr_db": snr_db,
                        "entropy_bits": bits,
                        "time_s": time_s,
                        "coherence_time_s": t_c,
                        "probability": estimate.probability,
                        "n_episodes": estimate.n_episodes,
                        "std_error": estimate.std_error,
                        "ci95_low": estimate.ci95_low,
                        "ci95_high": estimate.ci95_high,
                        "master_seed": estimate.master_seed,
                        "analytic": analytic,
                        "convolution": convolution,
                        "reference": reference,
                        "z_score": check.z_score,
                        "agreement": check.ok,
                    })
                    label = f"{cfg.metric.value} {name} {dist.describe()} H={bits:g} T={time_s:g}s"
                    print(
                        f"{label}: mc={estimate.probability:.6g} ± {estimate.std_error:.2g}, "
                        f"reference={reference:.6g}, z={check.z_score:.2f} "
                        f"{'ok' if check.ok else 'FAIL'}",
                        file=sys.stderr,
                    )
                    if not check.ok:
                        failures.append(label)

    emit(to_csv(COLUMNS, rows), cfg.output)
    if failures:
        raise OracleDisagreementError(
            f"{len(failures)} estimate(s) beyond {AGREEMENT_SIGMAS:g} standard errors: {', '.join(failures)}"
        )
    return 0
