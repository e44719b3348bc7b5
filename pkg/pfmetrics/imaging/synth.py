"""
Synthetic Corpus - Seeded Image Classes and Random Measures

Three image classes stand in for natural image collections:

- gaussian-blobs: smooth sums of isotropic Gaussian bumps
- uniform-shapes: filled circles, rectangles and triangles on black
- salt-noise: sparse random bright pixels

Every generator draws from its own numpy Generator seeded by
(seed, class index, size, image index), so a corpus is reproducible file
by file. Random measures for bound verification come from the same
module, including independently drawn pairs recentered so that they
share a center exactly.
"""

import logging
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import cv2
import numpy as np

from ..errors import ImageReadError
from ..measures.grid_measure import GridMeasure
from .loader import write_pgm

logger = logging.getLogger(__name__)

MIN_SHAPE_COVERAGE = 0.10
MAX_SHAPE_COVERAGE = 0.90
# correction masses this far below zero are rounding noise on a collinear pair
ROUNDING_SLACK = 1e-14


def gaussian_blobs(rng: np.random.Generator, n: int) -> np.ndarray:
    """1-3 Gaussian bumps scaled so the brightest pixel is 255."""
    yy, xx = np.mgrid[0:n, 0:n].astype(np.float64)
    image = np.zeros((n, n))
    for _ in range(int(rng.integers(1, 4))):
        cy, cx = rng.uniform(0.15, 0.85, size=2) * n
        sigma = rng.uniform(0.05, 0.2) * n
        amplitude = rng.uniform(0.5, 1.0)
        image += amplitude * np.exp(-((yy - cy) ** 2 + (xx - cx) ** 2) / (2.0 * sigma ** 2))
    return np.rint(255.0 * image / image.max()).astype(np.uint8)


def _draw_shape(image: np.ndarray, rng: np.random.Generator) -> None:
    n = image.shape[0]
    value = int(rng.integers(128, 256))
    kind = int(rng.integers(0, 3))
    if kind == 0:
        center = tuple(int(c) for c in rng.integers(0, n, size=2))
        radius = int(rng.integers(max(1, n // 10), max(2, n // 3)))
        cv2.circle(image, center, radius, value, thickness=-1)
    elif kind == 1:
        x0, y0 = (int(c) for c in rng.integers(0, n - 1, size=2))
        w, h = (int(c) for c in rng.integers(max(2, n // 6), max(3, n // 2), size=2))
        cv2.rectangle(image, (x0, y0), (min(n - 1, x0 + w), min(n - 1, y0 + h)), value, thickness=-1)
    else:
        points = rng.integers(0, n, size=(3, 2)).astype(np.int32)
        cv2.fillPoly(image, [points], value)


def uniform_shapes(rng: np.random.Generator, n: int, attempts: int = 100) -> np.ndarray:
    """Filled shapes covering between 10% and 90% of the pixels."""
    for _ in range(attempts):
        image = np.zeros((n, n), dtype=np.uint8)
        for _ in range(int(rng.integers(1, 4))):
            _draw_shape(image, rng)
        coverage = np.count_nonzero(image) / image.size
        if MIN_SHAPE_COVERAGE <= coverage <= MAX_SHAPE_COVERAGE:
            return image
    logger.warning(f"Shape generator fell back to a centered square at N={n}")
    image = np.zeros((n, n), dtype=np.uint8)
    lo, hi = n // 4, n // 4 + max(1, n // 2)
    image[lo:hi, lo:hi] = 255
    return image


def salt_noise(rng: np.random.Generator, n: int) -> np.ndarray:
    density = rng.uniform(0.02, 0.10)
    mask = rng.random((n, n)) < density
    image = np.where(mask, rng.integers(1, 256, size=(n, n)), 0).astype(np.uint8)
    if not image.any():
        image[int(rng.integers(0, n)), int(rng.integers(0, n))] = 255
    return image


GENERATORS: Dict[str, Callable[[np.random.Generator, int], np.ndarray]] = {
    'gaussian-blobs': gaussian_blobs,
    'uniform-shapes': uniform_shapes,
    'salt-noise': salt_noise,
}


def _class_index(name: str) -> int:
    if name not in GENERATORS:
        raise ValueError(f"Unknown image class {name!r}; expected one of {', '.join(GENERATORS)}")
    return sorted(GENERATORS).index(name)


def generate_class(name: str, seed: int, count: int, n: int) -> List[np.ndarray]:
    """Images of one class; image i depends only on (seed, class, n, i)."""
    generator = GENERATORS.get(name)
    index = _class_index(name)
    return [generator(np.random.default_rng([seed, index, n, i]), n) for i in range(count)]


def generate_corpus(
    seed: int, count: int, n: int, classes: Sequence[str] = tuple(GENERATORS)
) -> Dict[str, List[Tuple[str, np.ndarray]]]:
    """Named images per class, names '<class>_<index>.pgm'."""
    return {
        name: [(f"{name}_{i:03d}.pgm", img) for i, img in enumerate(generate_class(name, seed, count, n))]
        for name in classes
    }


def write_corpus(
    out_dir: Union[str, Path],
    seed: int,
    count: int,
    sizes: Sequence[int],
    classes: Sequence[str] = tuple(GENERATORS),
) -> List[Path]:
    """
    Write a corpus as out_dir/n<size>/<class>/<class>_<index>.pgm.

    Args:
        out_dir: Root directory (created if missing)
        seed: Corpus seed
        count: Images per class and size
        sizes: Grid sizes N
        classes: Generator names

    Returns:
        Written paths in generation order
    """
    root = Path(out_dir)
    written: List[Path] = []
    try:
        for n in sizes:
            for name, images in generate_corpus(seed, count, n, classes).items():
                folder = root / f"n{n}" / name
                folder.mkdir(parents=True, exist_ok=True)
                written.extend(write_pgm(folder / fname, img) for fname, img in images)
    except OSError as e:
        raise ImageReadError(f"Cannot write corpus under {root}: {str(e)}")
    logger.info(f"Wrote {len(written)} images under {root}")
    return written


# --- random measures --------------------------------------------------------

def random_measure(rng: np.random.Generator, n: int, dim: int = 2) -> GridMeasure:
    """Random probability measure with a random support fraction."""
    shape = (n,) * dim
    weights = rng.random(shape) ** 2
    weights = np.where(rng.random(shape) < rng.uniform(0.3, 1.0), weights, 0.0)
    if not weights.any():
        weights.flat[int(rng.integers(0, weights.size))] = 1.0
    return GridMeasure(weights / weights.sum())


def symmetrize(mu: GridMeasure) -> GridMeasure:
    """Point-symmetrize about the grid center ((N-1)/(2N), ...)."""
    return GridMeasure(0.5 * (mu.weights + np.flip(mu.weights)))


def _boundary_indices(n: int, dim: int) -> np.ndarray:
    idx = np.indices((n,) * dim).reshape(dim, -1).T
    on_edge = np.any((idx == 0) | (idx == n - 1), axis=1)
    return idx[on_edge]


def _mean_correction(points: np.ndarray, target: np.ndarray, residual: np.ndarray) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    """
    Nonnegative masses a at one or two points P with sum a (P - target) = residual.

    Returns (point rows, masses) with the smallest total mass, or None
    when no pair spans the residual with nonnegative coefficients.
    """
    offsets = points - target
    if len(target) == 1:
        u = offsets[:, 0]
        with np.errstate(divide='ignore', invalid='ignore'):
            amount = np.where(u * residual[0] > 0, residual[0] / u, np.inf)
        best = int(np.argmin(amount))
        if not np.isfinite(amount[best]):
            return None
        return np.array([best]), np.array([amount[best]])

    det = np.outer(offsets[:, 0], offsets[:, 1]) - np.outer(offsets[:, 1], offsets[:, 0])
    cross_d = residual[0] * offsets[:, 1] - residual[1] * offsets[:, 0]
    with np.errstate(divide='ignore', invalid='ignore'):
        a_i = cross_d[None, :] / det
        a_j = -cross_d[:, None] / det
    valid = (np.abs(det) > 1e-12) & (a_i >= -ROUNDING_SLACK) & (a_j >= -ROUNDING_SLACK)
    valid &= np.triu(np.ones_like(valid), k=1)
    if not valid.any():
        return None
    total = np.where(valid, a_i + a_j, np.inf)
    i, j = np.unravel_index(int(np.argmin(total)), total.shape)
    return np.array([i, j]), np.maximum(np.array([a_i[i, j], a_j[i, j]]), 0.0)


def recentered_partner(
    rng: np.random.Generator, target: Sequence[float], n: int, dim: int = 2
) -> Optional[GridMeasure]:
    """
    Independent random measure whose center equals target exactly.

    A random measure on a sub-box is rolled by the grid-aligned shift that
    brings its center closest to target (clipped so the support never
    wraps), then the remaining sub-cell offset is removed by adding mass
    at one or two boundary points and renormalizing.

    Returns:
        The partner, or None when the residual cannot be corrected with
        nonnegative masses (target on the hull of the grid)
    """
    target = np.asarray(target, dtype=np.float64)
    k = max(1, (3 * n) // 4)
    weights = np.zeros((n,) * dim)
    corner = rng.integers(0, n - k + 1, size=dim)
    weights[tuple(slice(c, c + k) for c in corner)] = random_measure(rng, k, dim).weights

    partner = GridMeasure(weights)
    held = np.argwhere(weights > 0)
    shift = np.rint((target - partner.center().as_array()) * n).astype(int)
    shift = np.clip(shift, -held.min(axis=0), n - 1 - held.max(axis=0))
    weights = np.roll(weights, tuple(int(s) for s in shift), axis=tuple(range(dim)))

    residual = target - GridMeasure(weights).center().as_array()
    if np.max(np.abs(residual)) > 0:
        points = _boundary_indices(n, dim)
        correction = _mean_correction(points / n, target, residual)
        if correction is None:
            return None
        rows, amounts = correction
        for row, amount in zip(rows, amounts):
            weights[tuple(points[row])] += amount
    return GridMeasure(weights / weights.sum())


def centered_pair(rng: np.random.Generator, n: int, dim: int = 2, attempts: int = 16) -> Tuple[GridMeasure, GridMeasure]:
    """A random measure and an independently drawn partner with the same center."""
    for _ in range(attempts):
        mu = random_measure(rng, n, dim)
        nu = recentered_partner(rng, mu.center().coords, n, dim)
        if nu is not None:
            return mu, nu
    raise RuntimeError(f"No equal-center partner found on N={n} after {attempts} draws")


def verification_pairs(
    seed: int,
    n: int,
    count: int,
    centered_count: int = 0,
    dim: int = 2,
    symmetric_count: int = 0,
) -> List[Tuple[str, GridMeasure, GridMeasure]]:
    """
    Seeded pairs for bound verification.

    Ids are g{N}-i for independent random measures, c{N}-i for an
    independent measure recentered onto the center of the first, and
    s{N}-i for point-symmetrized pairs.
    """
    rng = np.random.default_rng([seed, n, dim])
    pairs = [(f"g{n}-{i:04d}", random_measure(rng, n, dim), random_measure(rng, n, dim)) for i in range(count)]
    for i in range(centered_count):
        pairs.append((f"c{n}-{i:04d}", *centered_pair(rng, n, dim)))
    for i in range(symmetric_count):
        mu = symmetrize(random_measure(rng, n, dim))
        nu = symmetrize(random_measure(rng, n, dim))
        pairs.append((f"s{n}-{i:04d}", mu, nu))
    return pairs


__all__ = [
    'GENERATORS',
    'gaussian_blobs',
    'uniform_shapes',
    'salt_noise',
    'generate_class',
    'generate_corpus',
    'write_corpus',
    'random_measure',
    'symmetrize',
    'recentered_partner',
    'centered_pair',
    'verification_pairs',
]
