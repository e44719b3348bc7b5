"""
Tests for the equivalence validator and bound reports.
"""

import json
import logging
import math

import numpy as np
import pytest

from conftest import centered_pair, delta, random_probability
from pfmetrics.errors import CentersDiffer
from pfmetrics.imaging.synth import verification_pairs
from pfmetrics.reports import CSV_COLUMNS, BoundReport, reports_to_csv, reports_to_json, write_reports
from pfmetrics.validation.equivalence import EquivalenceValidator, summarize, w1_constant, w2_constant

logger = logging.getLogger(__name__)

SUITE = [
    'f12_le_w1',
    'w1_le_c_f12',
    'f12_le_d1',
    'd1_le_w1',
    'w1_le_c_d1',
    'w2sq_le_sqrt2_w1',
    'f22_le_c_w2',
    'w2sq_le_c_f22',
]


@pytest.fixture
def validator():
    return EquivalenceValidator({'max_oversample': 16, 'max_sup_oversample': 8})


def test_constants():
    assert w1_constant(8) == pytest.approx((2 * math.pi * 8) ** 2 / (2 * math.pi))
    assert w2_constant(8) == pytest.approx((2 * math.pi * 8) ** 3 / math.pi)


def test_bound_report_pass_rule():
    ok = BoundReport.evaluate('b', 8, 'x', lhs=1.0, rhs=1.0 - 1e-10, constant=1.0)
    bad = BoundReport.evaluate('b', 8, 'x', lhs=1.0, rhs=0.9, constant=1.0)
    loose = BoundReport.evaluate('b', 8, 'x', lhs=1.0, rhs=0.9, constant=1.0, allowance=0.2)
    assert ok.passed and not bad.passed and loose.passed
    assert bad.failed and bad.slack == pytest.approx(-0.1)


def test_skipped_reports_never_fail():
    report = BoundReport.skip('b', 8, 'x', 2.0, 'MassMismatch: masses differ')
    assert report.skipped and not report.failed
    assert report.to_row()['pass'] == 'skip'
    assert report.to_dict()['lhs'] is None


def test_validate_pair_runs_the_full_suite(validator, rng):
    mu, nu = random_probability(rng, 8), random_probability(rng, 8)
    reports = validator.validate_pair(mu, nu, 'g8-0000')
    assert [r.bound_name for r in reports] == SUITE
    assert all(r.pair_id == 'g8-0000' and r.n == 8 for r in reports)
    by_name = {r.bound_name: r for r in reports}
    # unequal centers: the f_{2,2} checks are skipped
    assert by_name['f22_le_c_w2'].skipped
    assert 'CentersDiffer' in by_name['f22_le_c_w2'].note
    assert by_name['w2sq_le_c_f22'].skipped
    for name in SUITE[:6]:
        assert by_name[name].passed and not by_name[name].skipped, by_name[name]


def test_centered_pair_passes_every_bound(validator, rng):
    mu, nu = centered_pair(rng, 8)
    reports = validator.validate_pair(mu, nu, 'c8-0000')
    assert all(r.passed and not r.skipped for r in reports), [r for r in reports if r.failed or r.skipped]


def test_symmetrized_pairs_pass_every_bound(validator):
    pairs = verification_pairs(seed=2, n=8, count=0, symmetric_count=2)
    reports = validator.validate_pairs(pairs)
    assert {r.pair_id for r in reports} == {'s8-0000', 's8-0001'}
    assert all(r.passed and not r.skipped for r in reports)


def test_lattice_exact_bounds_hold_on_a_batch(validator):
    pairs = verification_pairs(seed=3, n=8, count=6, centered_count=3)
    reports = validator.validate_pairs(pairs, threads=2)
    summary = summarize(reports)
    assert summary['converged_failures'] == 0, summary
    assert summary['all_passed']
    assert summary['by_bound']['f12_le_w1']['passed'] == 9
    assert summary['by_bound']['f22_le_c_w2']['passed'] == 3
    assert summary['by_bound']['f22_le_c_w2']['skipped'] == 6


def test_default_refinement_converges_on_a_batch():
    validator = EquivalenceValidator()
    pairs = verification_pairs(seed=11, n=8, count=4, centered_count=6)
    reports = validator.validate_pairs(pairs, threads=2)
    quadrature = [
        r for r in reports
        if r.bound_name in ('f12_le_w1', 'w1_le_c_f12', 'f22_le_c_w2', 'w2sq_le_c_f22') and not r.skipped
    ]
    assert len(quadrature) == 2 * 10 + 2 * 6
    assert all(r.quadrature_converged for r in quadrature), [
        (r.pair_id, r.bound_name, r.note) for r in quadrature if not r.quadrature_converged
    ]
    assert summarize(reports)['failed'] == 0


def test_oversample_cap_bounds_the_lattice():
    validator = EquivalenceValidator()
    assert validator._oversample_cap(8) == 128
    assert validator._oversample_cap(32) == 64
    assert validator._oversample_cap(4096) == 2


def test_parallel_batches_keep_input_order(validator):
    pairs = verification_pairs(seed=5, n=4, count=4)
    serial = validator.validate_pairs(pairs, threads=1)
    parallel = validator.validate_pairs(pairs, threads=4)
    assert [r.to_row() for r in serial] == [r.to_row() for r in parallel]


def test_mass_mismatched_pair_is_skipped(validator):
    mu = delta(4, (0, 0))
    nu = delta(4, (1, 1), mass=2.0)
    reports = validator.validate_pair(mu, nu, 'bad')
    assert all(r.skipped for r in reports)
    assert any('MassMismatch' in r.note for r in reports)
    assert summarize(reports)['all_passed']


def test_f22_upper_requires_equal_centers(validator, pair):
    with pytest.raises(CentersDiffer):
        validator.check_f22_upper(*pair)


def test_translated_lower_bound(validator, pair):
    report = validator.check_f22_lower(*pair, translated=True)
    assert report.bound_name == 'w2sq_le_c_F22'
    assert not report.skipped and report.passed


def test_d1_sandwich_note_records_refinement(validator, pair):
    left, right = validator.check_d1_sandwich(*pair)
    assert left.passed and right.passed
    assert left.note.startswith('refined r=')
    assert right.constant == pytest.approx(w1_constant(8))


def test_report_serialization(validator, pair, tmp_path):
    reports = validator.validate_pair(*pair, pair_id='p')
    text = reports_to_csv(reports)
    lines = text.splitlines()
    assert lines[0] == ','.join(CSV_COLUMNS)
    assert len(lines) == len(reports) + 1

    summary = summarize(reports)
    payload = json.loads(reports_to_json(reports, summary))
    assert payload['summary']['total'] == len(reports)
    assert len(payload['reports']) == len(reports)

    path = write_reports(reports, tmp_path / 'reports.json', 'json', summary)
    assert json.loads(path.read_text())['summary'] == json.loads(json.dumps(summary))


def test_summary_counts_solver_errors_as_blocking():
    broken = BoundReport(
        bound_name='f12_le_w1', n=8, pair_id='x', lhs=math.nan, rhs=math.nan, constant=1.0,
        slack=math.nan, quadrature_converged=False, passed=False, note='SolverFailed: boom',
    )
    assert not summarize([broken])['all_passed']
    unconverged = BoundReport.evaluate('w1_le_c_f12', 8, 'y', 2.0, 1.0, 10.0, quadrature_converged=False)
    summary = summarize([unconverged])
    assert summary['failed'] == 1 and summary['all_passed']
    logger.info("✓ Summary distinguishes blocking and non-blocking failures")


def test_default_corpus_is_seeded():
    first = verification_pairs(seed=0, n=8, count=2, centered_count=1)
    second = verification_pairs(seed=0, n=8, count=2, centered_count=1)
    assert [pid for pid, _, _ in first] == ['g8-0000', 'g8-0001', 'c8-0000']
    assert all(np.array_equal(a.weights, b.weights) for (_, a, _), (_, b, _) in zip(first, second))
