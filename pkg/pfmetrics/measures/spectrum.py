"""
Spectrum - Fourier Transforms of Grid Measures on the Periodic Lattice

The transform mu_hat(k) = sum_y mu_y exp(-i <y/N, k>) is sampled at
k_j = 2*pi*j/r, j in {0..rN-1}^d, by zero-padding the weight array to
(rN)^d and taking one fast transform. The lattice covers one period
[0, T)^d with T = 2*pi*N. Translation multiplies by a phase; dilation
rescales the lattice without touching the values.
"""

import logging
import math
import threading
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Dict, Iterable, Optional, Tuple

import numpy as np
import scipy.fft

from ..errors import GridMismatch, OversampleZero
from .grid_measure import (
    DilatedMeasure,
    GridMeasure,
    MeasureLike,
    TranslatedMeasure,
    Translation,
    dilate,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Sampled transform on the lattice gamma * 2*pi*j / r."""

    dim: int
    n: int
    oversample: int
    values: np.ndarray
    gamma: float = 1.0
    shift: Tuple[float, ...] = field(default=())

    def __post_init__(self):
        if not self.shift:
            object.__setattr__(self, 'shift', (0.0,) * self.dim)
        self.values.setflags(write=False)

    @property
    def size(self) -> int:
        """Lattice points per axis, rN."""
        return self.oversample * self.n

    @property
    def period(self) -> float:
        return self.gamma * 2.0 * math.pi * self.n

    @property
    def spacing(self) -> float:
        return self.gamma * 2.0 * math.pi / self.oversample

    @property
    def mass(self) -> float:
        return float(self.values[(0,) * self.dim].real)

    def frequencies(self) -> np.ndarray:
        """Per-axis frequencies k_j, j = 0..rN-1."""
        return self.spacing * np.arange(self.size, dtype=np.float64)

    def closed_values(self) -> np.ndarray:
        """
        Values on the closed cell, (rN+1)^d nodes including k_a = T.

        The closing face is filled by periodic wrap; for a translated
        spectrum the wrapped face picks up the phase exp(-i shift_a T).
        """
        out = np.pad(self.values, [(0, 1)] * self.dim, mode='wrap')
        for axis, tau in enumerate(self.shift):
            if tau != 0.0:
                face = [slice(None)] * self.dim
                face[axis] = -1
                out[tuple(face)] *= np.exp(-1j * tau * self.period)
        return out

    def closed_norms(self) -> np.ndarray:
        return _closed_norms(self.dim, self.size, self.spacing)


@lru_cache(maxsize=32)
def _closed_norms(dim: int, size: int, spacing: float) -> np.ndarray:
    axis = spacing * np.arange(size + 1, dtype=np.float64)
    grids = np.meshgrid(*([axis] * dim), indexing='ij')
    norms = np.sqrt(sum(g * g for g in grids))
    norms.setflags(write=False)
    return norms


def transform(mu: GridMeasure, oversample: int) -> Spectrum:
    """
    Sample mu_hat on the oversampled lattice.

    Args:
        mu: Grid measure
        oversample: Lattice refinement r >= 1

    Returns:
        Spectrum with (rN)^d values
    """
    if oversample < 1:
        raise OversampleZero(f"oversample must be >= 1, got {oversample}")
    shape = (oversample * mu.n,) * mu.dim
    values = scipy.fft.fftn(mu.weights, s=shape)
    return Spectrum(dim=mu.dim, n=mu.n, oversample=int(oversample), values=values)


def phase_translate(spec: Spectrum, tau: Translation) -> Spectrum:
    """Multiply every value by exp(-i <tau, k_j>); the lattice is unchanged."""
    shift = tau.as_array()
    if not np.any(shift):
        return spec
    freqs = spec.frequencies()
    phase = np.ones((1,) * spec.dim, dtype=np.complex128)
    for axis, t in enumerate(shift):
        shape = [1] * spec.dim
        shape[axis] = spec.size
        phase = phase * np.exp(-1j * t * freqs).reshape(shape)
    new_shift = tuple(float(a + b) for a, b in zip(spec.shift, shift))
    return replace(spec, values=spec.values * phase, shift=new_shift)


def evaluate_at(mu: MeasureLike, k) -> np.ndarray:
    """
    Direct summation of the transform at arbitrary frequencies.

    Args:
        mu: Any measure-like (its support carries translation or dilation)
        k: Frequencies, shape (d,) or (M, d)

    Returns:
        Complex scalar or array of shape (M,)
    """
    coords, weights = mu.support()
    k = np.asarray(k, dtype=np.float64)
    single = k.ndim == 1
    k = np.atleast_2d(k)
    values = np.exp(-1j * (k @ coords.T)) @ weights
    return values[0] if single else values


def dilated_eval(mu: GridMeasure, gamma: float, k) -> np.ndarray:
    """Transform of the gamma-dilated measure, mu_hat(k / gamma)."""
    return evaluate_at(dilate(mu, gamma), k)


def transform_difference(a: MeasureLike, b: MeasureLike, k: np.ndarray) -> np.ndarray:
    """
    a_hat(k) - b_hat(k) at frequencies k of shape (M, d).

    Uses exp(-i t) - 1 = -2 sin^2(t/2) - i sin(t) so differences stay
    accurate for |k| close to 0.
    """
    out = np.full(k.shape[0], a.mass - b.mass, dtype=np.complex128)
    for sign, mu in ((1.0, a), (-1.0, b)):
        coords, weights = mu.support()
        theta = k @ coords.T
        half = np.sin(0.5 * theta)
        out += sign * ((-2.0 * half * half - 1j * np.sin(theta)) @ weights)
    return out


def spectrum_of(mu: MeasureLike, oversample: int, cache: Optional['SpectrumCache'] = None) -> Spectrum:
    """Spectrum of any measure-like, reusing cached base transforms."""
    base = cache.get(mu.base, oversample) if cache is not None else transform(mu.base, oversample)
    if isinstance(mu, TranslatedMeasure):
        return phase_translate(base, mu.translation)
    if isinstance(mu, DilatedMeasure):
        return replace(base, gamma=mu.gamma)
    return base


def require_same_grid(a: MeasureLike, b: MeasureLike) -> None:
    if a.dim != b.dim or a.n != b.n:
        raise GridMismatch(
            f"Measures live on different grids: d={a.dim}, N={a.n} vs d={b.dim}, N={b.n}"
        )
    if a.period != b.period:
        raise GridMismatch(f"Measures have different periods: {a.period!r} vs {b.period!r}")


class SpectrumCache:
    """
    Thread-safe cache of base transforms keyed by (measure fingerprint, r).

    Lookups are lock-free dictionary reads; inserts and counters are
    updated under the lock.
    """

    def __init__(self):
        self._store: Dict[Tuple[str, int], Spectrum] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

        logger.info("Spectrum cache initialized")

    def get(self, mu: GridMeasure, oversample: int) -> Spectrum:
        key = (mu.fingerprint(), int(oversample))
        spec = self._store.get(key)
        if spec is not None:
            with self._lock:
                self.hits += 1
            return spec
        spec = transform(mu, oversample)
        with self._lock:
            self.misses += 1
            return self._store.setdefault(key, spec)

    def warm(self, measures: Iterable[GridMeasure], oversample: int) -> int:
        """Precompute spectra; returns the number of entries afterwards."""
        for mu in measures:
            self.get(mu, oversample)
        return len(self._store)

    def stats(self) -> Dict[str, int]:
        return {'entries': len(self._store), 'hits': self.hits, 'misses': self.misses}

    def clear(self) -> None:
        with self._lock:
            self._store.clear()
            self.hits = 0
            self.misses = 0

    def __len__(self) -> int:
        return len(self._store)


__all__ = [
    'Spectrum',
    'SpectrumCache',
    'transform',
    'phase_translate',
    'evaluate_at',
    'dilated_eval',
    'transform_difference',
    'spectrum_of',
    'require_same_grid',
]
