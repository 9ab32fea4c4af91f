"""
Shared fixtures for the test suite.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add project root to path
PROJECT_ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(PROJECT_ROOT))

from engine.vandermonde import FrequencyTuple  # noqa: E402
from series.function_registry import get_function_registry  # noqa: E402


@pytest.fixture
def rng():
    """Seeded generator so every test sees the same draws."""
    return np.random.default_rng(20240611)


@pytest.fixture
def exp_F():
    return get_function_registry().get("exp")


@pytest.fixture
def registry():
    """The function registry, reset to the built-ins afterwards."""
    reg = get_function_registry()
    yield reg
    reg.reset()


def jittered_roots(m: int, rng: np.random.Generator, jitter: float = 0.05, radius: float = 0.9) -> FrequencyTuple:
    """Well-separated random tuple: rotated roots of unity with small perturbations."""
    base = radius * np.exp(2j * np.pi * (np.arange(m) / m + rng.uniform()))
    noise = jitter * (rng.uniform(-1, 1, m) + 1j * rng.uniform(-1, 1, m))
    return FrequencyTuple.from_points(base + noise)
