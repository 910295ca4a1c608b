"""Shared fixtures for the paragraded test suite."""

import numpy as np
import pytest

from paragraded.utils.config import Config

TEST_SEED = 20240601


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator; each test gets a fresh stream."""
    return np.random.default_rng(TEST_SEED)


@pytest.fixture
def clean_env(monkeypatch):
    """Remove every PARAGRADED_* override so defaults apply."""
    for name in (
        "PARAGRADED_SEED",
        "PARAGRADED_CUTOFF",
        "PARAGRADED_EDGE_WINDOW",
        "PARAGRADED_TOL_EXACT",
        "PARAGRADED_TOL_SYNTH",
        "PARAGRADED_CORRECTION_GAIN",
        "PARAGRADED_STRICT_GRADES",
        "PARAGRADED_LOG_FORMAT",
        "LOG_LEVEL",
    ):
        monkeypatch.delenv(name, raising=False)
    return monkeypatch


@pytest.fixture
def config(clean_env) -> Config:
    return Config(load_env_file=False)
