"""
Grid Measures - Discrete Measures on the Regular Grid

This module represents nonnegative measures supported on the grid
G_N = {y/N : y in {0..N-1}^d} inside [0,1)^d, together with the two
measure-like views used downstream: a translated measure (support shifted
by tau, weights untouched) and a dilated measure (support scaled by
1/gamma). All three expose the same small interface: dim, n, mass,
period, support(), center().
"""

import hashlib
import logging
import math
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Dict, Sequence, Tuple, Union

import numpy as np

from ..errors import (
    AllZeroImage,
    ColorUnsupported,
    NegativePixel,
    NonFiniteWeight,
    NonPositiveGamma,
    NonSquare,
    NotProbability,
    ZeroMass,
)

logger = logging.getLogger(__name__)

PROBABILITY_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Center:
    """First moment of a measure, in grid coordinates."""

    coords: Tuple[float, ...]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=np.float64)


@dataclass(frozen=True)
class Translation:
    """Offset applied to support points."""

    tau: Tuple[float, ...]

    def __post_init__(self):
        if not all(math.isfinite(t) for t in self.tau):
            raise NonFiniteWeight(f"Translation entries must be finite: {self.tau}")

    @classmethod
    def of(cls, values: Sequence[float]) -> 'Translation':
        return cls(tuple(float(v) for v in values))

    @classmethod
    def zero(cls, dim: int) -> 'Translation':
        return cls((0.0,) * dim)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.tau, dtype=np.float64)

    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))

    def __add__(self, other: 'Translation') -> 'Translation':
        return Translation.of(self.as_array() + other.as_array())

    def __sub__(self, other: 'Translation') -> 'Translation':
        return Translation.of(self.as_array() - other.as_array())

    def __neg__(self) -> 'Translation':
        return Translation.of(-self.as_array())


@dataclass(frozen=True, eq=False)
class GridMeasure:
    """
    Nonnegative weights on G_N.

    weights[y] is the mass at grid point y/N; the array is copied on
    construction and made read-only.
    """

    weights: np.ndarray
    mass: float = field(init=False)

    def __post_init__(self):
        arr = np.array(self.weights, dtype=np.float64, copy=True)
        if arr.ndim not in (1, 2):
            raise NonSquare(f"Grid measures must be 1-D or 2-D, got shape {arr.shape}")
        if arr.ndim == 2 and arr.shape[0] != arr.shape[1]:
            raise NonSquare(f"Grid must be square, got {arr.shape[0]}x{arr.shape[1]}")
        if arr.size == 0:
            raise NonSquare("Grid must have at least one point per axis")
        if not np.all(np.isfinite(arr)):
            raise NonFiniteWeight("Weights must be finite")
        if np.any(arr < 0):
            raise NegativePixel(f"Weights must be nonnegative (min {arr.min()!r})")
        arr.setflags(write=False)
        object.__setattr__(self, 'weights', arr)
        object.__setattr__(self, 'mass', float(arr.sum()))

    @property
    def dim(self) -> int:
        return self.weights.ndim

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @property
    def period(self) -> float:
        return 2.0 * math.pi * self.n

    @property
    def base(self) -> 'GridMeasure':
        return self

    def is_probability(self, tol: float = PROBABILITY_TOLERANCE) -> bool:
        return abs(self.mass - 1.0) <= tol

    def grid_coordinates(self) -> np.ndarray:
        """Coordinates y/N of every grid point, shape (N^d, d), C order."""
        idx = np.indices(self.weights.shape).reshape(self.dim, -1).T
        return idx.astype(np.float64) / self.n

    def support(self) -> Tuple[np.ndarray, np.ndarray]:
        """Coordinates and weights of the positive-weight points."""
        flat = self.weights.ravel()
        keep = np.flatnonzero(flat > 0)
        return self.grid_coordinates()[keep], flat[keep]

    def support_indices(self) -> np.ndarray:
        """Grid multi-indices of the positive-weight points, shape (K, d)."""
        return np.argwhere(self.weights > 0)

    def center(self) -> Center:
        return center(self)

    def fingerprint(self) -> str:
        digest = hashlib.sha1(self.weights.tobytes())
        digest.update(repr(self.weights.shape).encode())
        return digest.hexdigest()

    def __repr__(self) -> str:
        return f"GridMeasure(dim={self.dim}, n={self.n}, mass={self.mass!r})"


@dataclass(frozen=True, eq=False)
class TranslatedMeasure:
    """A grid measure whose support points are shifted by tau."""

    measure: GridMeasure
    translation: Translation

    @property
    def dim(self) -> int:
        return self.measure.dim

    @property
    def n(self) -> int:
        return self.measure.n

    @property
    def mass(self) -> float:
        return self.measure.mass

    @property
    def period(self) -> float:
        return self.measure.period

    @property
    def base(self) -> GridMeasure:
        return self.measure

    def is_probability(self, tol: float = PROBABILITY_TOLERANCE) -> bool:
        return self.measure.is_probability(tol)

    def support(self) -> Tuple[np.ndarray, np.ndarray]:
        coords, weights = self.measure.support()
        return coords + self.translation.as_array(), weights

    def center(self) -> Center:
        return Center(tuple(self.measure.center().as_array() + self.translation.as_array()))


@dataclass(frozen=True, eq=False)
class DilatedMeasure:
    """A grid measure with support points y/(gamma N); its transform is mu_hat(k/gamma)."""

    measure: GridMeasure
    gamma: float

    @property
    def dim(self) -> int:
        return self.measure.dim

    @property
    def n(self) -> int:
        return self.measure.n

    @property
    def mass(self) -> float:
        return self.measure.mass

    @property
    def period(self) -> float:
        return self.gamma * self.measure.period

    @property
    def base(self) -> GridMeasure:
        return self.measure

    def is_probability(self, tol: float = PROBABILITY_TOLERANCE) -> bool:
        return self.measure.is_probability(tol)

    def support(self) -> Tuple[np.ndarray, np.ndarray]:
        coords, weights = self.measure.support()
        return coords / self.gamma, weights

    def center(self) -> Center:
        return Center(tuple(self.measure.center().as_array() / self.gamma))


MeasureLike = Union[GridMeasure, TranslatedMeasure, DilatedMeasure]


def from_image(pixels) -> GridMeasure:
    """
    Normalize a square grayscale intensity array into a probability measure.

    Args:
        pixels: 2-D array of nonnegative finite intensities

    Returns:
        GridMeasure with mass 1 and dim 2
    """
    arr = np.asarray(pixels, dtype=np.float64)
    if arr.ndim == 3:
        raise ColorUnsupported(f"Expected a single-channel image, got shape {arr.shape}")
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise NonSquare(f"Image must be square, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteWeight("Image contains non-finite intensities")
    if np.any(arr < 0):
        raise NegativePixel("Image contains negative intensities")
    total = arr.sum()
    if total <= 0:
        raise AllZeroImage("Image has no positive pixel")
    return GridMeasure(arr / total)


def center(mu: MeasureLike) -> Center:
    """Mean support position sum_y (y/N) mu_y / mass."""
    if isinstance(mu, (TranslatedMeasure, DilatedMeasure)):
        return mu.center()
    if mu.mass <= 0:
        raise ZeroMass("Center is undefined for a measure of zero mass")
    axes = np.indices(mu.weights.shape, dtype=np.float64) / mu.n
    coords = tuple(float((axis * mu.weights).sum() / mu.mass) for axis in axes)
    return Center(coords)


def matching_translation(mu: MeasureLike, nu: MeasureLike) -> Translation:
    """
    Translation tau such that nu translated by tau has the center of mu.

    Both measures must be probability measures.
    """
    for name, m in (('mu', mu), ('nu', nu)):
        if m.mass <= 0:
            raise ZeroMass(f"{name} has zero mass")
        if not m.is_probability():
            raise NotProbability(f"{name} must have unit mass, got {m.mass!r}")
    return Translation.of(mu.center().as_array() - nu.center().as_array())


def translate(mu: MeasureLike, tau: Translation) -> TranslatedMeasure:
    """Shift the support of mu by tau; translations compose."""
    if isinstance(mu, TranslatedMeasure):
        return TranslatedMeasure(mu.measure, mu.translation + tau)
    if isinstance(mu, DilatedMeasure):
        raise TypeError("Translating a dilated measure is not supported")
    return TranslatedMeasure(mu, tau)


def dilate(mu: GridMeasure, gamma: float) -> DilatedMeasure:
    if not gamma > 0 or not math.isfinite(gamma):
        raise NonPositiveGamma(f"gamma must be a positive finite number, got {gamma!r}")
    return DilatedMeasure(mu, float(gamma))


def moments(mu: MeasureLike, max_order: int = 2) -> Dict[Tuple[int, ...], float]:
    """
    Raw mixed moments of total order <= max_order.

    Keys are tuples of axis indices, e.g. () for mass, (0,) for the first
    coordinate moment, (0, 1) for sum x_0 x_1 mu.
    """
    coords, weights = mu.support()
    result: Dict[Tuple[int, ...], float] = {(): float(weights.sum())}
    for order in range(1, max_order + 1):
        for axes in combinations_with_replacement(range(mu.dim), order):
            term = weights.copy()
            for a in axes:
                term = term * coords[:, a]
            result[axes] = float(term.sum())
    return result


__all__ = [
    'GridMeasure',
    'TranslatedMeasure',
    'DilatedMeasure',
    'MeasureLike',
    'Center',
    'Translation',
    'PROBABILITY_TOLERANCE',
    'from_image',
    'center',
    'matching_translation',
    'translate',
    'dilate',
    'moments',
]
