"""
Tests for grid measures, centers, moments, translation and dilation.
"""

import logging
import math

import numpy as np
import pytest

from conftest import delta, random_probability
from pfmetrics.errors import (
    AllZeroImage,
    ColorUnsupported,
    InputError,
    NegativePixel,
    NonFiniteWeight,
    NonPositiveGamma,
    NonSquare,
    NotProbability,
    PreconditionError,
    ZeroMass,
)
from pfmetrics.measures.grid_measure import (
    GridMeasure,
    Translation,
    center,
    dilate,
    from_image,
    matching_translation,
    moments,
    translate,
)

logger = logging.getLogger(__name__)


def test_from_image_normalizes_to_unit_mass():
    mu = from_image([[0, 1], [1, 2]])
    assert mu.mass == pytest.approx(1.0)
    assert mu.weights[1, 1] == pytest.approx(0.5)
    assert mu.dim == 2 and mu.n == 2


@pytest.mark.parametrize(
    "pixels, error",
    [
        (np.zeros((4, 4)), AllZeroImage),
        ([[1, -1], [0, 0]], NegativePixel),
        (np.ones((3, 4)), NonSquare),
        (np.ones((4, 4, 3)), ColorUnsupported),
        ([[1, np.nan], [0, 0]], NonFiniteWeight),
    ],
)
def test_from_image_rejects_bad_input(pixels, error):
    with pytest.raises(error):
        from_image(pixels)


def test_input_errors_map_to_exit_code_two():
    with pytest.raises(InputError) as info:
        from_image(np.zeros((2, 2)))
    assert info.value.exit_code == 2
    assert isinstance(info.value, ValueError)


def test_weights_are_read_only():
    mu = from_image(np.ones((4, 4)))
    with pytest.raises(ValueError):
        mu.weights[0, 0] = 1.0


def test_grid_measure_rejects_higher_dimensions():
    with pytest.raises(NonSquare):
        GridMeasure(np.ones((2, 2, 2)))


def test_center_of_delta():
    mu = delta(8, (2, 3))
    assert center(mu).coords == pytest.approx((0.25, 0.375))


def test_center_of_zero_mass_is_undefined():
    with pytest.raises(ZeroMass):
        center(GridMeasure(np.zeros((4, 4))))


def test_translation_moves_center_and_composes(rng):
    mu = random_probability(rng, 8)
    a, b = Translation.of([0.1, -0.2]), Translation.of([0.05, 0.3])
    moved = translate(translate(mu, a), b)
    assert moved.translation.tau == pytest.approx((0.15, 0.1))
    assert moved.center().as_array() == pytest.approx(center(mu).as_array() + [0.15, 0.1])
    assert moved.mass == mu.mass


def test_matching_translation_aligns_centers(rng):
    mu, nu = random_probability(rng, 8), random_probability(rng, 8)
    tau = matching_translation(mu, nu)
    assert translate(nu, tau).center().as_array() == pytest.approx(center(mu).as_array(), abs=1e-12)


def test_matching_translation_is_idempotent(rng):
    for _ in range(10):
        mu, nu = random_probability(rng, 8), random_probability(rng, 8)
        moved = translate(nu, matching_translation(mu, nu))
        assert matching_translation(mu, moved).norm() <= 1e-12


def test_matching_translation_needs_probabilities():
    mu = delta(4, (0, 0))
    with pytest.raises(NotProbability):
        matching_translation(mu, delta(4, (1, 1), mass=2.0))
    with pytest.raises(PreconditionError):
        matching_translation(mu, GridMeasure(np.zeros((4, 4))))


def test_dilation_scales_support_and_period(rng):
    mu = random_probability(rng, 8)
    dilated = dilate(mu, 2.0)
    coords, weights = mu.support()
    d_coords, d_weights = dilated.support()
    assert np.allclose(d_coords, coords / 2.0)
    assert np.array_equal(d_weights, weights)
    assert dilated.period == pytest.approx(2.0 * 2.0 * math.pi * 8)


@pytest.mark.parametrize("gamma", [0.0, -1.0, math.inf])
def test_dilation_rejects_bad_gamma(gamma):
    with pytest.raises(NonPositiveGamma):
        dilate(delta(4, (0, 0)), gamma)


def test_moments_keys_and_values(rng):
    mu = random_probability(rng, 6)
    m = moments(mu, 2)
    assert set(m) == {(), (0,), (1,), (0, 0), (0, 1), (1, 1)}
    assert m[()] == pytest.approx(1.0)
    assert (m[(0,)], m[(1,)]) == pytest.approx(center(mu).coords)


def test_fingerprint_tracks_weights():
    a = from_image(np.arange(16.0).reshape(4, 4) + 1)
    b = from_image(np.arange(16.0).reshape(4, 4) + 1)
    c = from_image(np.arange(16.0).reshape(4, 4) + 2)
    assert a.fingerprint() == b.fingerprint()
    assert a.fingerprint() != c.fingerprint()
    logger.info("✓ Fingerprints distinguish weight arrays")


def test_one_dimensional_measures_are_supported():
    mu = GridMeasure([0.25, 0.25, 0.5, 0.0])
    assert mu.dim == 1 and mu.n == 4
    assert center(mu).coords == pytest.approx((0.3125,))
