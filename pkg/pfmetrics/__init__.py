"""
pfmetrics - Periodic Fourier-Based Metrics on Grid Measures

Distances between discrete probability measures supported on regular
grids (grayscale images normalized to unit mass):

- Periodic Fourier-based metrics f_{s,p}^(alpha) and the sup-metric d_s
- Translated variants D_2 and F_{2,2} for measures with different centers
- Exact W_1 and W_2 through a certified transportation solver
- Mechanical verification of the Fourier/Wasserstein equivalence bounds

Features:
- Oversampled spectra through zero-padded FFTs, cached per image
- Quadrature refinement with a convergence protocol
- Threaded pairwise matrices with deterministic CSV output
- Seeded synthetic image corpora
"""

from .core.pipeline import PairwisePipeline
from .core.processor import MetricProcessor
from .measures.grid_measure import GridMeasure, center, dilate, from_image, translate
from .measures.spectrum import SpectrumCache, transform
from .metrics.fourier import (
    MetricParams,
    d_sup,
    f22_translated,
    feasibility,
    pfm,
    refine,
    translated_d2,
    tv_like,
)
from .transport.solver import TransportPlan, w1_cdf_1d, wp_exact
from .validation.equivalence import EquivalenceValidator, summarize

__version__ = "1.0.0"
__author__ = "pfmetrics Development Team"

__all__ = [
    'MetricProcessor',
    'PairwisePipeline',
    'GridMeasure',
    'center',
    'dilate',
    'from_image',
    'translate',
    'SpectrumCache',
    'transform',
    'MetricParams',
    'd_sup',
    'f22_translated',
    'feasibility',
    'pfm',
    'refine',
    'translated_d2',
    'tv_like',
    'TransportPlan',
    'w1_cdf_1d',
    'wp_exact',
    'EquivalenceValidator',
    'summarize',
]
