"""Fixtures for testing."""

from pathlib import Path

import numpy as np
import pytest

from geomopt.const import DEFAULT_SEED
from geomopt.diagnostics import random_lorentzian
from geomopt.tensor_core import Metric4

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def rng():
    """Seeded generator shared by the randomized tests."""
    return np.random.default_rng(DEFAULT_SEED)


@pytest.fixture
def lorentzian(rng):
    """Factory for random Lorentzian metrics with g_00 > 0."""

    def make() -> Metric4:
        return random_lorentzian(rng)

    return make


@pytest.fixture
def eta():
    """Minkowski metric."""
    return Metric4.minkowski()


@pytest.fixture
def mixed_metric():
    """g_00 = 1, g_01 = 0.5, spatial block -I."""
    g = -np.eye(4)
    g[0, 0] = 1.0
    g[0, 1] = g[1, 0] = 0.5
    return Metric4(g)


@pytest.fixture
def fixture_path():
    """Path of a scene file under tests/fixtures."""

    def resolve(name: str) -> Path:
        return FIXTURES / name

    return resolve
