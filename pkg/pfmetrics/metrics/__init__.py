"""
Fourier-based metrics and the selector registry used by the processor.
"""

from .base import BaseMetric
from .fourier import (
    ConvergedValue,
    FeasibilityReport,
    MetricParams,
    d_sup,
    f22_translated,
    feasibility,
    matched_moment_order,
    pfm,
    refine,
    refine_dsup,
    refine_pfm,
    translated_d2,
    translated_dsup,
    translated_pfm,
    tv_like,
)
from .selectors import build_metric, supported_selectors

__all__ = [
    'BaseMetric',
    'ConvergedValue',
    'FeasibilityReport',
    'MetricParams',
    'd_sup',
    'f22_translated',
    'feasibility',
    'matched_moment_order',
    'pfm',
    'refine',
    'refine_dsup',
    'refine_pfm',
    'translated_d2',
    'translated_dsup',
    'translated_pfm',
    'tv_like',
    'build_metric',
    'supported_selectors',
]
