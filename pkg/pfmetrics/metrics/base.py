"""
Base Metric - Common Interface for Distances Between Grid Measures

Every concrete metric declares the hypotheses it needs (same grid, equal
masses, unit masses) and implements compute(). validate_inputs() checks
the declared hypotheses up front so orchestrators can report a violated
hypothesis without running the computation.
"""

import logging
from abc import ABC, abstractmethod
from typing import Any, Dict, Optional

from ..measures.grid_measure import PROBABILITY_TOLERANCE, MeasureLike
from ..measures.spectrum import SpectrumCache

logger = logging.getLogger(__name__)


class BaseMetric(ABC):
    """
    Abstract base class for metrics.

    Subclasses provide a selector name, their hypotheses and the
    computation itself.
    """

    selector: str = ''

    def __init__(self, config: Optional[Dict] = None):
        """
        Initialize the metric.

        Args:
            config: Metric options (oversample, tolerances, solver guard)
        """
        self.config = config or {}
        self.requirements = self._get_requirements()

        logger.debug(f"{self.__class__.__name__} initialized")

    @abstractmethod
    def _get_requirements(self) -> Dict[str, bool]:
        """
        Hypotheses on the input pair.

        Returns:
            Mapping with keys 'same_grid', 'equal_mass', 'probability'
        """

    @abstractmethod
    def compute(self, mu: MeasureLike, nu: MeasureLike, cache: Optional[SpectrumCache] = None) -> float:
        """
        Evaluate the metric on a pair.

        Args:
            mu, nu: Measures
            cache: Optional spectrum cache (ignored by non-spectral metrics)

        Returns:
            Metric value
        """

    @property
    def name(self) -> str:
        return self.selector

    @property
    def oversample(self) -> Optional[int]:
        return None

    def validate_inputs(self, mu: MeasureLike, nu: MeasureLike) -> Dict[str, Any]:
        """
        Check the declared hypotheses.

        Returns:
            Dictionary with 'valid', 'errors' and 'warnings'
        """
        results = {'valid': True, 'errors': [], 'warnings': []}
        if self.requirements.get('same_grid') and (mu.dim != nu.dim or mu.n != nu.n):
            results['errors'].append(f"grid mismatch: N={mu.n} vs N={nu.n}")
        if self.requirements.get('equal_mass') and abs(mu.mass - nu.mass) > PROBABILITY_TOLERANCE:
            results['errors'].append(f"mass mismatch: {mu.mass!r} vs {nu.mass!r}")
        if self.requirements.get('probability'):
            for label, m in (('first', mu), ('second', nu)):
                if abs(m.mass - 1.0) > PROBABILITY_TOLERANCE:
                    results['errors'].append(f"{label} measure is not a probability measure")
        if mu.n != nu.n and not self.requirements.get('same_grid'):
            results['warnings'].append('measures use different resolutions')
        results['valid'] = not results['errors']
        return results
