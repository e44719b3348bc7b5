"""
Tests for the metric processor, selectors and the pairwise pipeline.
"""

import logging
import math

import pytest

from conftest import delta, random_probability
from pfmetrics.core.pipeline import PairwisePipeline
from pfmetrics.core.processor import MetricProcessor
from pfmetrics.errors import UnknownMetric
from pfmetrics.imaging.loader import write_pgm
from pfmetrics.imaging.synth import generate_class
from pfmetrics.metrics.fourier import MetricParams, pfm
from pfmetrics.metrics.selectors import build_metric, supported_selectors

logger = logging.getLogger(__name__)


@pytest.mark.parametrize(
    "selector, name",
    [
        ('w1', 'w1'),
        ('Wasserstein2', 'w2'),
        ('f{1,2,0}', 'f[s=1,p=2,alpha=0]'),
        ('pfm(2, 4, 0.5)', 'f[s=2,p=4,alpha=0.5]'),
        ('dsup{2}', 'dsup[s=2]'),
        ('d2t', 'd2t'),
        ('f22t', 'f22t'),
        ('tv', 'tv'),
    ],
)
def test_selector_parsing(selector, name):
    assert build_metric(selector).name == name


def test_selector_defaults_and_keywords():
    assert build_metric('f').name == 'f[s=1,p=2,alpha=0]'
    assert build_metric('f', s=2, p=3).name == 'f[s=2,p=3,alpha=0]'
    assert build_metric('f{1}', s=2).name == 'f[s=1,p=2,alpha=0]'


@pytest.mark.parametrize("selector", ['w3', 'f{a,b}', '', 'f{1,2,0'])
def test_unknown_selectors(selector):
    with pytest.raises(UnknownMetric):
        build_metric(selector)


def test_supported_selectors_match_processor():
    assert MetricProcessor().get_supported_metrics() == supported_selectors()


def test_processor_compute_success(pair):
    processor = MetricProcessor({'oversample': 4})
    result = processor.compute(*pair, 'f{1,2,0}')
    assert result['success']
    assert result['value'] == pfm(*pair, MetricParams(s=1, p=2, alpha=0, oversample=4))
    assert result['oversample'] == 4 and result['n'] == 8 and result['seconds'] >= 0.0


def test_processor_compute_reports_failures(pair):
    processor = MetricProcessor()
    infeasible = processor.compute(*pair, 'f{2,2,0}')
    assert not infeasible['success']
    assert infeasible['error_kind'] == 'InfeasibleParams' and infeasible['exit_code'] == 3
    unknown = processor.compute(*pair, 'nope')
    assert unknown['error_kind'] == 'UnknownMetric' and unknown['exit_code'] == 2
    bad_p = processor.compute(*pair, 'f', p=0.5)
    assert not bad_p['success'] and bad_p['exit_code'] == 2


def test_metric_hypotheses_are_checked_up_front():
    metric = build_metric('w1')
    checks = metric.validate_inputs(delta(4, (0, 0)), delta(4, (1, 1), mass=2.0))
    assert not checks['valid']
    assert any('mass mismatch' in e for e in checks['errors'])
    assert build_metric('tv').validate_inputs(delta(4, (0, 0)), delta(4, (1, 1), mass=2.0))['valid']


def test_processor_status_reports_cache(pair):
    processor = MetricProcessor()
    processor.compute(*pair, 'f')
    status = processor.get_status()
    assert status['status'] == 'operational'
    assert status['cache']['entries'] == 2


def _named(rng, count=5, n=8):
    return [(f"img_{i}.pgm", random_probability(rng, n)) for i in range(count)]


def test_pipeline_rows_cover_unordered_pairs(rng):
    result = PairwisePipeline().process(_named(rng), 'w1')
    rows = result['rows']
    assert len(rows) == 10 and not result['errors']
    assert all(row['image_a'] < row['image_b'] for row in rows)
    assert rows == sorted(rows, key=lambda r: (r['image_a'], r['image_b']))
    steps = [s['step'] for s in result['metadata']['steps']]
    assert steps == ['load', 'spectrum_warmup', 'pairwise']
    assert result['metadata']['steps'][1]['status'] == 'skipped'


def test_pipeline_is_thread_count_invariant(rng):
    measures = _named(rng, count=6)
    serial = PairwisePipeline({'threads': 1}).process(measures, 'f{1,2,0}')
    threaded = PairwisePipeline({'threads': 8}).process(measures, 'f{1,2,0}')
    assert [r['value'] for r in serial['rows']] == [r['value'] for r in threaded['rows']]
    assert threaded['metadata']['cache']['entries'] == 6
    assert threaded['metadata']['steps'][1]['status'] == 'completed'


def test_pipeline_collects_pair_failures(rng):
    measures = _named(rng, count=3)
    result = PairwisePipeline().process(measures, 'f{2,2,0}')
    assert result['rows'] == []
    assert len(result['errors']) == 3
    assert all(e['error_kind'] == 'InfeasibleParams' for e in result['errors'])


def test_pipeline_reads_directories(tmp_path):
    for i, img in enumerate(generate_class('gaussian-blobs', seed=1, count=10, n=16)):
        write_pgm(tmp_path / f"blob_{i:02d}.pgm", img)
    result = PairwisePipeline({'threads': 4}).process(tmp_path, 'f{1,2,0}')
    assert len(result['rows']) == 45
    assert all(math.isfinite(row['value']) and row['N'] == 16 for row in result['rows'])
    logger.info(f"✓ Pairwise pipeline processed {result['metadata']['pairs']} pairs")
