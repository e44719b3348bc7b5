"""
Core orchestration: single-pair processor and pairwise pipeline.
"""

from .pipeline import MATRIX_COLUMNS, PairwisePipeline
from .processor import MetricProcessor

__all__ = ['MetricProcessor', 'PairwisePipeline', 'MATRIX_COLUMNS']
