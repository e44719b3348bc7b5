"""
Tests for the periodic Fourier-based metrics and the sup-metric.

Lattice-exact properties (the Lipschitz bound, power-mean monotonicity,
domination by the sup-metric, the dilation law) are asserted with tight
tolerances; quadrature convergence is asserted through refine().
"""

import logging
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import ValidationError
from scipy.integrate import quad

from conftest import centered_pair, delta, random_probability
from pfmetrics.errors import (
    GridMismatch,
    InfeasibleParams,
    MassMismatch,
    PreconditionError,
)
from pfmetrics.measures.grid_measure import GridMeasure, Translation, dilate, translate
from pfmetrics.measures.spectrum import SpectrumCache, transform_difference
from pfmetrics.metrics.fourier import (
    MetricParams,
    d_sup,
    f22_translated,
    feasibility,
    matched_moment_order,
    pfm,
    refine,
    refine_pfm,
    translated_d2,
    translated_pfm,
    tv_like,
)
from pfmetrics.transport.solver import wp_exact

logger = logging.getLogger(__name__)

F12 = MetricParams(s=1, p=2, alpha=0, oversample=2)
F22 = MetricParams(s=2, p=2, alpha=0, oversample=2)
seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)


# --- parameters and feasibility ---------------------------------------------

@pytest.mark.parametrize(
    "kwargs",
    [{'p': 0.5}, {'alpha': -1.0}, {'oversample': 0}, {'s': math.inf}, {'p': math.nan}],
)
def test_metric_params_validation(kwargs):
    with pytest.raises(ValidationError):
        MetricParams(**kwargs)


def test_metric_params_properties():
    assert F12.pure and F12.weight_exponent == 2.0
    assert not MetricParams(s=1, p=2, alpha=0.5).pure
    assert MetricParams(p=math.inf).is_sup
    assert F12.label() == 'f[s=1,p=2,alpha=0]'
    assert F12.with_oversample(8).oversample == 8


def test_matched_moment_order(rng):
    mu, nu = random_probability(rng, 8), random_probability(rng, 8)
    assert matched_moment_order(mu, mu) == 2
    assert matched_moment_order(mu, nu) == 0
    assert matched_moment_order(*centered_pair(rng, 8)) >= 1
    assert matched_moment_order(delta(4, (0, 0)), delta(4, (0, 0), mass=2.0)) == -1


def test_feasibility_reports_margin(rng):
    mu, nu = random_probability(rng, 8), random_probability(rng, 8)
    report = feasibility(mu, nu, F22)
    assert not report.feasible and report.margin == 0.0 and report.matched_moment_order == 0
    assert feasibility(mu, nu, F12).feasible
    sup = feasibility(mu, nu, MetricParams(s=1, p=math.inf))
    assert sup.feasible and sup.margin == 0.0


def test_f22_on_unequal_centers_is_infeasible(pair):
    with pytest.raises(InfeasibleParams) as info:
        pfm(*pair, F22)
    assert info.value.margin == 0.0
    assert info.value.matched_moment_order == 0
    assert info.value.exit_code == 3


def test_positive_weight_exponent_requires_equal_mass():
    with pytest.raises(MassMismatch):
        pfm(delta(4, (0, 0)), delta(4, (1, 1), mass=2.0), F12)
    with pytest.raises(MassMismatch):
        d_sup(delta(4, (0, 0)), delta(4, (1, 1), mass=2.0), 1.0, 2)


def test_sup_metric_beyond_matched_moments_is_unbounded(pair):
    with pytest.raises(InfeasibleParams):
        d_sup(*pair, 3.0, 2)


def test_grid_mismatch(rng):
    with pytest.raises(GridMismatch):
        pfm(random_probability(rng, 4), random_probability(rng, 8), F12)


# --- values -----------------------------------------------------------------

def test_identical_measures_are_at_distance_zero(rng):
    mu = random_probability(rng, 8)
    assert pfm(mu, mu, F12) == 0.0
    assert pfm(mu, mu, F22) == 0.0
    assert d_sup(mu, mu, 1.0, 2) == 0.0
    assert tv_like(mu, mu) == 0.0


def test_delta_pair_is_below_w1(delta_pair):
    value = pfm(*delta_pair, F12.with_oversample(4))
    assert 0.0 < value < 0.25


def test_p_infinity_dispatches_to_sup_metric(pair):
    params = MetricParams(s=1, p=math.inf, oversample=2)
    assert pfm(*pair, params) == d_sup(*pair, 1.0, 2)


def test_tv_like_matches_weight_norm_and_unit_lattice(rng):
    mu = GridMeasure(rng.random((6, 6)))
    nu = GridMeasure(2.0 * rng.random((6, 6)))
    direct = float(np.linalg.norm((mu.weights - nu.weights).ravel()))
    assert tv_like(mu, nu) == direct
    unit = pfm(mu, nu, MetricParams(s=0, p=2, alpha=0, oversample=1))
    assert unit == pytest.approx(direct, abs=1e-10)


def test_tv_like_on_single_points():
    assert tv_like(delta(4, (0, 0)), delta(4, (2, 1))) == pytest.approx(math.sqrt(2.0), abs=1e-12)
    assert tv_like(delta(4, (1, 1), mass=0.5), delta(4, (1, 1))) == pytest.approx(0.5, abs=1e-12)


@given(seed=seeds)
@settings(max_examples=25, deadline=None)
def test_tv_like_triangle_inequality(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (GridMeasure(rng.random((6, 6))) for _ in range(3))
    assert tv_like(a, c) <= tv_like(a, b) + tv_like(b, c) + 1e-9


def test_cache_does_not_change_values(pair):
    cache = SpectrumCache()
    assert pfm(*pair, F12, cache=cache) == pfm(*pair, F12)
    assert pfm(*pair, F12, cache=cache) == pfm(*pair, F12)
    assert cache.hits >= 2


# --- lattice-exact properties -----------------------------------------------

@given(seed=seeds)
@settings(max_examples=20, deadline=None)
def test_f12_and_d1_are_below_w1(seed):
    rng = np.random.default_rng(seed)
    mu, nu = random_probability(rng, 6), random_probability(rng, 6)
    w1, _ = wp_exact(mu, nu, 1)
    assert pfm(mu, nu, F12) <= w1 * (1 + 1e-9)
    assert d_sup(mu, nu, 1.0, 2) <= w1 * (1 + 1e-9)


@given(seed=seeds)
@settings(max_examples=25, deadline=None)
def test_f12_triangle_inequality(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (random_probability(rng, 6) for _ in range(3))
    assert pfm(a, c, F12) <= pfm(a, b, F12) + pfm(b, c, F12) + 1e-9


@given(seed=seeds)
@settings(max_examples=25, deadline=None)
def test_monotonicity_in_p_and_sup_domination(seed):
    rng = np.random.default_rng(seed)
    mu, nu = random_probability(rng, 6), random_probability(rng, 6)
    f2 = pfm(mu, nu, F12)
    f4 = pfm(mu, nu, MetricParams(s=1, p=4, oversample=2))
    assert f2 <= f4 * (1 + 1e-9)
    assert f4 <= d_sup(mu, nu, 1.0, 2) * (1 + 1e-9)


@given(seed=seeds)
@settings(max_examples=25, deadline=None)
def test_monotonicity_in_s(seed):
    rng = np.random.default_rng(seed)
    mu, nu = centered_pair(rng, 6)
    bound = math.sqrt(2.0) * mu.period
    assert pfm(mu, nu, F12) <= bound * pfm(mu, nu, F22) * (1 + 1e-9)


@given(seed=seeds)
@settings(max_examples=15, deadline=None)
def test_sup_metric_never_decreases_with_oversample(seed):
    rng = np.random.default_rng(seed)
    mu, nu = random_probability(rng, 6), random_probability(rng, 6)
    assert d_sup(mu, nu, 1.0, 2) <= d_sup(mu, nu, 1.0, 4) * (1 + 1e-12)


@pytest.mark.parametrize("gamma", [0.5, 2.0])
@pytest.mark.parametrize("s, p, alpha", [(1, 2, 0), (2, 2, 0), (1, 2, 0.5)])
def test_dilation_law(rng, gamma, s, p, alpha):
    params = MetricParams(s=s, p=p, alpha=alpha, oversample=2)
    for _ in range(5):
        mu, nu = centered_pair(rng, 6) if s == 2 else (random_probability(rng, 6), random_probability(rng, 6))
        base = pfm(mu, nu, params)
        scaled = pfm(dilate(mu, gamma), dilate(nu, gamma), params)
        assert scaled * gamma ** (s + alpha / p) == pytest.approx(base, rel=1e-9)


# --- translated variants ----------------------------------------------------

def _shifted_copy(rng):
    weights = np.zeros((8, 8))
    weights[1:4, 1:4] = rng.random((3, 3)) + 0.1
    weights /= weights.sum()
    return GridMeasure(weights), GridMeasure(np.roll(weights, 2, axis=0))


def test_translated_metrics_of_a_shift_equal_the_offset(rng):
    mu, nu = _shifted_copy(rng)
    assert f22_translated(mu, nu, 2) == pytest.approx(0.25, abs=1e-8)
    assert translated_d2(mu, nu, 2) == pytest.approx(0.25, abs=1e-8)


def test_translated_pfm_is_symmetric_in_offset(rng):
    mu, nu = random_probability(rng, 6), random_probability(rng, 6)
    forward = translated_pfm(mu, nu, F22)
    backward = translated_pfm(nu, mu, F22)
    assert forward == pytest.approx(backward, rel=1e-6)
    assert forward >= math.dist(mu.center().coords, nu.center().coords)


def test_translated_d2_is_symmetric(rng):
    for _ in range(10):
        mu, nu = random_probability(rng, 8), random_probability(rng, 8)
        assert abs(translated_d2(mu, nu, 2) - translated_d2(nu, mu, 2)) <= 1e-12


@given(seed=seeds)
@settings(max_examples=25, deadline=None)
def test_translated_d2_triangle_inequality(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (random_probability(rng, 6) for _ in range(3))
    assert translated_d2(a, c, 2) <= translated_d2(a, b, 2) + translated_d2(b, c, 2) + 1e-9


def test_sup_metric_depends_on_relative_translation(rng):
    for _ in range(10):
        mu, nu = random_probability(rng, 6), random_probability(rng, 6)
        v, w = Translation.of(rng.normal(size=2) / 4), Translation.of(rng.normal(size=2) / 4)
        moved = d_sup(translate(mu, v), translate(nu, w), 1.0, 2)
        relative = d_sup(mu, translate(nu, w - v), 1.0, 2)
        assert abs(moved - relative) <= 1e-12


def test_translated_metrics_need_probabilities():
    with pytest.raises(PreconditionError):
        f22_translated(delta(4, (0, 0)), delta(4, (1, 1), mass=2.0), 2)


def test_translated_input_uses_phase_shift(rng):
    mu = random_probability(rng, 6)
    moved = translate(mu, Translation.of([0.5, 0.25]))
    value = pfm(mu, moved, F12)
    assert 0.0 < value <= math.hypot(0.5, 0.25) * (1 + 1e-9)


# --- convergence protocol ---------------------------------------------------

def test_line_integral_matches_adaptive_quadrature(rng):
    mu, nu = random_probability(rng, 8, dim=1), random_probability(rng, 8, dim=1)
    period = 2 * math.pi * 8

    def integrand(t: float) -> float:
        diff = transform_difference(mu, nu, np.array([[t]]))[0]
        return abs(diff) ** 2 / (t * t)

    integral, _ = quad(integrand, 0.0, period, limit=2000, epsabs=1e-13)
    reference = math.sqrt(integral / period)
    assert pfm(mu, nu, F12.with_oversample(32)) == pytest.approx(reference, rel=1e-3)


def test_refine_converges_on_a_cubic_tail():
    result = refine(lambda r: 1.0 + 1.0 / r ** 3, start=2, max_oversample=32, tolerance=0.005)
    assert result.converged
    assert result.oversample == 16
    assert result.relative_change < 0.005


def test_refine_reports_non_convergence():
    result = refine(lambda r: float(r), start=2, max_oversample=32)
    assert not result.converged
    assert result.oversample == 32
    assert result.previous == 16.0


def test_refined_f12_converges(pair):
    result = refine_pfm(*pair, F12, max_oversample=16)
    assert result.converged
    logger.info(f"✓ f12 converged at r={result.oversample} (change {result.relative_change:.2e})")
