"""
Exact optimal transport between grid measures.
"""

from .solver import (
    DEFAULT_GUARD,
    TransportPlan,
    w1_cdf_1d,
    w2_translation_identity,
    wp_exact,
)

__all__ = [
    'DEFAULT_GUARD',
    'TransportPlan',
    'w1_cdf_1d',
    'w2_translation_identity',
    'wp_exact',
]
