"""
Measure and spectrum primitives: grid measures, their translated and
dilated views, and sampled Fourier transforms.
"""

from .grid_measure import (
    Center,
    DilatedMeasure,
    GridMeasure,
    MeasureLike,
    TranslatedMeasure,
    Translation,
    center,
    dilate,
    from_image,
    matching_translation,
    moments,
    translate,
)
from .spectrum import (
    Spectrum,
    SpectrumCache,
    dilated_eval,
    evaluate_at,
    phase_translate,
    spectrum_of,
    transform,
)

__all__ = [
    'Center',
    'DilatedMeasure',
    'GridMeasure',
    'MeasureLike',
    'TranslatedMeasure',
    'Translation',
    'center',
    'dilate',
    'from_image',
    'matching_translation',
    'moments',
    'translate',
    'Spectrum',
    'SpectrumCache',
    'dilated_eval',
    'evaluate_at',
    'phase_translate',
    'spectrum_of',
    'transform',
]
