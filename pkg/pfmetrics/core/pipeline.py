"""
Pairwise Pipeline - Distance Matrices Over an Image Collection

Runs one metric over every unordered pair of distinct images:

- Image loading and normalization
- Spectrum warmup (spectral metrics only, timed separately)
- Threaded pairwise evaluation
- Deterministic row ordering
"""

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from itertools import combinations
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from ..imaging.loader import load_directory
from ..measures.grid_measure import GridMeasure
from .processor import MetricProcessor

logger = logging.getLogger(__name__)

MATRIX_COLUMNS = ['image_a', 'image_b', 'metric', 'N', 'value', 'seconds']

NamedMeasure = Tuple[str, GridMeasure]


class PairwisePipeline:
    """
    Pairwise distance pipeline.

    Rows are sorted by (image_a, image_b) before they are returned, so the
    thread count never changes the output.
    """

    def __init__(self, config: Optional[Dict] = None, processor: Optional[MetricProcessor] = None):
        """
        Initialize the pairwise pipeline.

        Args:
            config: Pipeline options (threads, warm_spectra) plus processor options
            processor: Processor to evaluate pairs with
        """
        self.config = {'threads': 1, 'warm_spectra': True, **(config or {})}
        self.processor = processor or MetricProcessor(config)

        logger.info("Pairwise pipeline initialized")

    def process(
        self,
        source: Union[str, Path, Sequence[NamedMeasure]],
        selector: str,
        **metric_args,
    ) -> Dict[str, Any]:
        """
        Compute a metric on all unordered pairs of distinct images.

        Args:
            source: Image directory or a sequence of (name, measure)
            selector: Metric selector
            **metric_args: s, p, alpha, oversample

        Returns:
            Dictionary with 'rows', 'errors' and 'metadata'
        """
        start_time = time.time()
        processing_steps = []

        # Step 1: load
        logger.info("Step 1: Image loading")
        if isinstance(source, (str, Path)):
            measures = load_directory(source)
        else:
            measures = sorted(source, key=lambda item: item[0])
        processing_steps.append({'step': 'load', 'status': 'completed', 'duration': time.time() - start_time})

        # Step 2: spectra
        metric = self.processor.get_metric(selector, **metric_args)
        warm_start = time.time()
        if self.config['warm_spectra'] and metric.oversample is not None:
            logger.info(f"Step 2: Spectrum warmup at oversample {metric.oversample}")
            self.processor.cache.warm((mu for _, mu in measures), metric.oversample)
            status = 'completed'
        else:
            status = 'skipped'
        processing_steps.append({'step': 'spectrum_warmup', 'status': status, 'duration': time.time() - warm_start})

        # Step 3: pairs
        pairs = list(combinations(measures, 2))
        threads = max(1, int(self.config['threads']))
        logger.info(f"Step 3: Evaluating {metric.name} on {len(pairs)} pairs with {threads} thread(s)")
        pair_start = time.time()

        def run(pair: Tuple[NamedMeasure, NamedMeasure]) -> Tuple[str, str, Dict[str, Any]]:
            (name_a, mu), (name_b, nu) = pair
            return name_a, name_b, self._evaluate(mu, nu, metric)

        if threads == 1:
            outcomes = [run(pair) for pair in pairs]
        else:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                outcomes = list(pool.map(run, pairs))
        processing_steps.append({'step': 'pairwise', 'status': 'completed', 'duration': time.time() - pair_start})

        rows, errors = [], []
        for name_a, name_b, result in outcomes:
            a, b = sorted((name_a, name_b))
            if result['success']:
                rows.append({
                    'image_a': a,
                    'image_b': b,
                    'metric': result['metric'],
                    'N': result['n'],
                    'value': result['value'],
                    'seconds': result['seconds'],
                })
            else:
                errors.append({'image_a': a, 'image_b': b, **result})
        rows.sort(key=lambda row: (row['image_a'], row['image_b']))
        errors.sort(key=lambda row: (row['image_a'], row['image_b']))

        total_duration = time.time() - start_time
        logger.info(f"Pairwise pipeline completed in {total_duration:.2f} seconds")
        return {
            'rows': rows,
            'errors': errors,
            'metadata': {
                'metric': metric.name,
                'images': len(measures),
                'pairs': len(pairs),
                'threads': threads,
                'processing_time': total_duration,
                'steps': processing_steps,
                'cache': self.processor.cache.stats(),
            },
        }

    def _evaluate(self, mu: GridMeasure, nu: GridMeasure, metric) -> Dict[str, Any]:
        try:
            return {'success': True, **self.processor.evaluate(mu, nu, metric)}
        except Exception as e:
            logger.error(f"Pair evaluation failed: {str(e)}")
            return {
                'success': False,
                'metric': metric.name,
                'error': str(e),
                'error_kind': type(e).__name__,
                'exit_code': getattr(e, 'exit_code', 1),
                'value': math.nan,
            }


__all__ = ['PairwisePipeline', 'MATRIX_COLUMNS']
