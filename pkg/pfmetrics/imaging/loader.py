"""
Image Loader - Grayscale PGM/PNG Ingestion

Reads ASCII (P2) and binary (P5) PGM files with 8- or 16-bit maxval and
grayscale PNG files through Pillow, and turns them into normalized grid
measures. Color images are rejected rather than converted.
"""

import logging
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np
from PIL import Image, UnidentifiedImageError

from ..errors import ColorUnsupported, EmptyCorpus, ImageFormatError, ImageReadError
from ..measures.grid_measure import GridMeasure, from_image

logger = logging.getLogger(__name__)

SUPPORTED_FORMATS = {'PPM', 'PNG'}
GRAYSCALE_MODES = {'L', 'I', 'I;16', 'I;16B', 'I;16L', 'I;16N', 'F'}
IMAGE_SUFFIXES = {'.pgm', '.png'}


def load_pixels(path: Union[str, Path]) -> np.ndarray:
    """
    Read a grayscale image as a float array.

    Args:
        path: PGM or PNG file

    Returns:
        2-D float64 array of raw intensities

    Raises:
        ImageReadError, ImageFormatError, ColorUnsupported
    """
    path = Path(path)
    try:
        with Image.open(path) as img:
            img.load()
            fmt, mode = img.format, img.mode
            if fmt not in SUPPORTED_FORMATS:
                raise ImageFormatError(f"{path}: unsupported format {fmt}")
            if mode not in GRAYSCALE_MODES:
                raise ColorUnsupported(f"{path}: mode {mode} is not single-channel grayscale")
            pixels = np.asarray(img, dtype=np.float64)
    except UnidentifiedImageError as e:
        raise ImageFormatError(f"{path}: not a recognized image ({str(e)})")
    except OSError as e:
        raise ImageReadError(f"{path}: {str(e)}")

    logger.debug(f"Loaded {path} ({fmt}, {mode}, {pixels.shape})")
    return pixels


def read_measure(path: Union[str, Path]) -> GridMeasure:
    """Load an image and normalize it to a probability measure."""
    return from_image(load_pixels(path))


def list_images(directory: Union[str, Path]) -> List[Path]:
    directory = Path(directory)
    if not directory.is_dir():
        raise ImageReadError(f"{directory} is not a directory")
    return sorted(p for p in directory.iterdir() if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES)


def load_directory(directory: Union[str, Path]) -> List[Tuple[str, GridMeasure]]:
    """
    Load every PGM/PNG image of a directory, sorted by file name.

    All images must share one resolution.
    """
    paths = list_images(directory)
    if not paths:
        raise EmptyCorpus(f"No PGM or PNG images in {directory}")
    measures = [(p.name, read_measure(p)) for p in paths]
    sizes = {m.n for _, m in measures}
    if len(sizes) > 1:
        raise ImageFormatError(f"Images in {directory} have mixed sizes: {sorted(sizes)}")
    logger.info(f"Loaded {len(measures)} images of size {sizes.pop()} from {directory}")
    return measures


def write_pgm(path: Union[str, Path], pixels: np.ndarray) -> Path:
    """Write an 8-bit binary (P5) PGM."""
    path = Path(path)
    arr = np.asarray(pixels)
    if arr.ndim != 2:
        raise ColorUnsupported('Only single-channel arrays can be written as PGM')
    Image.fromarray(np.clip(arr, 0, 255).astype(np.uint8)).save(path, format='PPM')
    return path


__all__ = [
    'load_pixels',
    'read_measure',
    'list_images',
    'load_directory',
    'write_pgm',
]
