"""Environment-driven configuration."""

from __future__ import annotations

import dataclasses
import logging

import pytest

from fading_limits.core.config import DEFAULT_SEED, Config

ENV_VARS = [
    "FADING_LIMITS_LOG_LEVEL",
    "FADING_LIMITS_SEED",
    "FADING_LIMITS_WORKERS",
    "FADING_LIMITS_BATCH_SIZE",
    "FADING_LIMITS_EPISODES",
    "FADING_LIMITS_CONV_BINS",
]


@pytest.fixture
def clean_env(monkeypatch):
    for name in ENV_VARS:
        monkeypatch.delenv(name, raising=False)
    return monkeypatch


def test_defaults(clean_env):
    cfg = Config.from_env()
    assert cfg.log_level == "WARNING"
    assert cfg.seed == DEFAULT_SEED == 20180901
    assert cfg.workers == 1
    assert cfg.batch_size == 65536
    assert cfg.episodes == 100_000
    assert cfg.conv_bins == 4096


def test_values_read_from_environment(clean_env):
    clean_env.setenv("FADING_LIMITS_LOG_LEVEL", "debug")
    clean_env.setenv("FADING_LIMITS_SEED", "0xff")
    clean_env.setenv("FADING_LIMITS_WORKERS", "4")
    clean_env.setenv("FADING_LIMITS_EPISODES", "5000")
    cfg = Config.from_env()
    assert cfg.log_level == "DEBUG"
    assert cfg.seed == 255
    assert cfg.workers == 4
    assert cfg.episodes == 5000


def test_invalid_values_fall_back_with_warning(clean_env, caplog):
    clean_env.setenv("FADING_LIMITS_WORKERS", "many")
    clean_env.setenv("FADING_LIMITS_CONV_BINS", "-3")
    clean_env.setenv("FADING_LIMITS_SEED", str(2**64))
    clean_env.setenv("FADING_LIMITS_LOG_LEVEL", "chatty")
    with caplog.at_level(logging.WARNING, logger="fading_limits.config"):
        cfg = Config.from_env()
    assert cfg.workers == 1
    assert cfg.conv_bins == 4096
    assert cfg.seed == DEFAULT_SEED
    assert cfg.log_level == "WARNING"
    assert "FADING_LIMITS_WORKERS" in caplog.text


def test_config_is_immutable(clean_env):
    cfg = Config.from_env()
    with pytest.raises(Exception):
        cfg.seed = 1


def test_every_field_has_a_variable():
    names = {field.name for field in dataclasses.fields(Config)}
    assert names == {"log_level", "seed", "workers", "batch_size", "episodes", "conv_bins"}
    assert {f"FADING_LIMITS_{name.upper()}" for name in names} == set(ENV_VARS)
