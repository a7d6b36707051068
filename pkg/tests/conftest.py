"""Shared fixtures for the partial matching test suite."""

import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT))

import core  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def diagonal_instance():
    """Two well-separated pairs: both get matched at ρ = 0.4."""
    return core.make_instance([[0.1, 0.9], [0.9, 0.1]], [1, 1], [1, 1], 0.4)


@pytest.fixture
def one_pair_instance():
    """Only (1, 1) is below the 0.8 threshold."""
    return core.make_instance([[0.1, 0.9], [0.9, 0.9]], [1, 1], [1, 1], 0.4)
