"""
Metric Processor - Single-Pair Distance Engine

Resolves metric selectors (with aliases and inline arguments), checks the
metric's hypotheses, and evaluates one pair of measures with wall-clock
timing around the metric call only.
"""

import logging
import time
from typing import Any, Dict, List, Optional

from ..errors import PFMError
from ..measures.grid_measure import MeasureLike
from ..measures.spectrum import SpectrumCache
from ..metrics.base import BaseMetric
from ..metrics.selectors import build_metric, supported_selectors
from ..transport.solver import DEFAULT_GUARD

logger = logging.getLogger(__name__)


class MetricProcessor:
    """
    Evaluates distances between grid measures.

    One processor owns one spectrum cache, so repeated evaluations on the
    same images reuse their transforms.
    """

    def __init__(self, config: Optional[Dict] = None, cache: Optional[SpectrumCache] = None):
        """
        Initialize the Metric Processor.

        Args:
            config: Overrides for oversample, tolerances and the solver guard
            cache: Shared spectrum cache; a private one is created if omitted
        """
        self.config = {**self._get_default_config(), **(config or {})}
        self.cache = cache if cache is not None else SpectrumCache()

        logger.info("Metric processor initialized")

    def _get_default_config(self) -> Dict[str, Any]:
        """Get default configuration for the processor."""
        return {
            'oversample': 2,
            'moment_tolerance': 1e-9,
            'solver_guard': DEFAULT_GUARD,
            'cross_check_tv': True,
        }

    def get_metric(
        self,
        selector: str,
        s: Optional[float] = None,
        p: Optional[float] = None,
        alpha: Optional[float] = None,
        oversample: Optional[int] = None,
    ) -> BaseMetric:
        """Resolve a selector into a configured metric."""
        return build_metric(
            selector,
            s=s,
            p=p,
            alpha=alpha,
            oversample=oversample or self.config['oversample'],
            config=self.config,
        )

    def evaluate(self, mu: MeasureLike, nu: MeasureLike, metric: BaseMetric) -> Dict[str, Any]:
        """
        Evaluate one metric on one pair, raising on any failure.

        Returns:
            Dictionary with metric, N, value, seconds and oversample
        """
        start = time.perf_counter()
        value = metric.compute(mu, nu, cache=self.cache)
        seconds = time.perf_counter() - start
        return {
            'metric': metric.name,
            'n': mu.n,
            'value': value,
            'seconds': seconds,
            'oversample': metric.oversample,
        }

    def compute(
        self,
        mu: MeasureLike,
        nu: MeasureLike,
        selector: str,
        **metric_args,
    ) -> Dict[str, Any]:
        """
        Evaluate a metric and report failures as data instead of raising.

        Args:
            mu, nu: Measures
            selector: Metric selector (see get_supported_metrics)
            **metric_args: s, p, alpha, oversample

        Returns:
            Result dictionary; 'success' False carries 'error' and 'error_kind'
        """
        try:
            metric = self.get_metric(selector, **metric_args)
            checks = metric.validate_inputs(mu, nu)
            for warning in checks['warnings']:
                logger.warning(f"{metric.name}: {warning}")
            result = self.evaluate(mu, nu, metric)
            logger.debug(f"{result['metric']} = {result['value']!r} in {result['seconds']:.4f}s")
            return {'success': True, **result}

        except (PFMError, ValueError) as e:
            logger.error(f"Error computing {selector}: {str(e)}")
            return {
                'success': False,
                'metric': selector,
                'error': str(e),
                'error_kind': type(e).__name__,
                'exit_code': getattr(e, 'exit_code', 2),
            }

    def get_supported_metrics(self) -> List[str]:
        return supported_selectors()

    def get_status(self) -> Dict[str, Any]:
        """Processor configuration and cache statistics."""
        return {
            'status': 'operational',
            'supported_metrics': self.get_supported_metrics(),
            'oversample': self.config['oversample'],
            'solver_guard': self.config['solver_guard'],
            'cache': self.cache.stats(),
        }


__all__ = ['MetricProcessor']
