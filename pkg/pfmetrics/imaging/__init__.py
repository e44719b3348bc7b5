"""
Image ingestion and seeded synthetic corpora.
"""

from .loader import list_images, load_directory, load_pixels, read_measure, write_pgm
from .synth import (
    GENERATORS,
    centered_pair,
    generate_corpus,
    random_measure,
    recentered_partner,
    symmetrize,
    verification_pairs,
    write_corpus,
)

__all__ = [
    'list_images',
    'load_directory',
    'load_pixels',
    'read_measure',
    'write_pgm',
    'GENERATORS',
    'centered_pair',
    'generate_corpus',
    'random_measure',
    'recentered_partner',
    'symmetrize',
    'verification_pairs',
    'write_corpus',
]
