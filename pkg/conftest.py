"""
Shared fixtures and measure factories for the pfmetrics test suite.
"""

import logging
import os
import sys
from typing import Sequence

import numpy as np
import pytest

# Add the repository root to the Python path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from pfmetrics.imaging.synth import centered_pair  # noqa: E402,F401
from pfmetrics.measures.grid_measure import GridMeasure  # noqa: E402

logging.basicConfig(level=logging.INFO)


def random_probability(rng: np.random.Generator, n: int, dim: int = 2, density: float = 0.6) -> GridMeasure:
    shape = (n,) * dim
    weights = rng.random(shape) * (rng.random(shape) < density)
    if not weights.any():
        weights.flat[0] = 1.0
    return GridMeasure(weights / weights.sum())


def delta(n: int, index: Sequence[int], mass: float = 1.0) -> GridMeasure:
    weights = np.zeros((n,) * len(index))
    weights[tuple(index)] = mass
    return GridMeasure(weights)


def uniform_on(n: int, cells: Sequence[Sequence[int]]) -> GridMeasure:
    weights = np.zeros((n,) * len(cells[0]))
    for cell in cells:
        weights[tuple(cell)] = 1.0 / len(cells)
    return GridMeasure(weights)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)


@pytest.fixture
def pair(rng):
    return random_probability(rng, 8), random_probability(rng, 8)


@pytest.fixture
def delta_pair():
    """Single white pixels at (0, 0) and (8, 0) on a 32x32 grid; W_1 = 0.25."""
    return delta(32, (0, 0)), delta(32, (8, 0))
