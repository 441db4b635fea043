"""
Application Configuration

Central configuration for the fading-limits toolkit.

Values come from the environment (optionally a `.env` file) and act as
defaults; command-line flags always win.
"""

from __future__ import annotations
import logging
import os
from dataclasses import dataclass
from typing import Callable, TypeVar

from dotenv import load_dotenv

logger = logging.getLogger("fading_limits.config")

T = TypeVar("T")

DEFAULT_SEED = 20180901


def _env_value(name: str, default: T, parse: Callable[[str], T]) -> T:
    """Read and parse an environment variable, falling back on bad input."""
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return parse(raw.strip())
    except ValueError:
        logger.warning(f"Ignoring invalid {name}={raw!r}; using {default!r}")
        return default


def _positive_int(raw: str) -> int:
    value = int(raw)
    if value <= 0:
        raise ValueError(f"expected a positive integer, got {raw}")
    return value


def _seed(raw: str) -> int:
    value = int(raw, 0)
    if not 0 <= value < 2**64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {raw}")
    return value


@dataclass(frozen=True)
class Config:
    """Toolkit configuration."""

    # Logging
    log_level: str = "WARNING"

    # Monte Carlo
    seed: int = DEFAULT_SEED
    workers: int = 1
    batch_size: int = 65536
    episodes: int = 100_000

    # Convolution engine
    conv_bins: int = 4096

    @classmethod
    def from_env(cls) -> "Config":
        """Load configuration from environment variables."""
        load_dotenv()

        log_level = os.getenv("FADING_LIMITS_LOG_LEVEL", "WARNING").upper()
        if not isinstance(logging.getLevelName(log_level), int):
            logger.warning(f"Unknown log level {log_level!r}; using WARNING")
            log_level = "WARNING"

        return cls(
            log_level=log_level,
            seed=_env_value("FADING_LIMITS_SEED", DEFAULT_SEED, _seed),
            workers=_env_value("FADING_LIMITS_WORKERS", 1, _positive_int),
            batch_size=_env_value("FADING_LIMITS_BATCH_SIZE", 65536, _positive_int),
            episodes=_env_value("FADING_LIMITS_EPISODES", 100_000, _positive_int),
            conv_bins=_env_value("FADING_LIMITS_CONV_BINS", 4096, _positive_int),
        )


# Global config instance
config = Config.from_env()
