import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import central_diff, fd_step
from steklovkit.symmetric_space import (
    H2,
    STANDARD_SPACES,
    Space,
    ball_volume,
    density,
    euclidean_ball_volume,
    mean_curvature_trace,
    radius_for_volume,
    sphere_area,
    sphere_lambda1,
    sphere_lambda1_alt,
    unit_sphere_area,
)

mp.mp.dps = 40
spaces = st.sampled_from(STANDARD_SPACES)
radii = st.floats(min_value=0.01, max_value=8.0)


def test_space_dimension_and_validation():
    assert Space(2, 3).dim == 6
    assert Space(8, 2).name == "CaH^2"
    assert Space.parse("4, 2") == Space(4, 2)
    with pytest.raises(ValueError):
        Space(8, 3)
    with pytest.raises(ValueError):
        Space(3, 2)
    with pytest.raises(ValueError):
        Space(1, 0)


def test_density_values():
    assert density(H2, 0.0) == 0.0
    assert density(Space(1, 1), 0.0) == 1.0
    assert density(H2, 1.0) == pytest.approx(float(mp.sinh(1)), rel=1e-15)
    expected = float(mp.sinh(1) ** 3 * mp.cosh(1))
    assert density(Space(2, 2), 1.0) == pytest.approx(expected, rel=1e-14)
    with pytest.raises(ValueError):
        density(H2, -0.1)


def test_mean_curvature_trace_values():
    r = 0.7
    assert mean_curvature_trace(H2, r) == pytest.approx(1 / math.tanh(r), rel=1e-15)
    expected = float(3 * mp.coth(1) + mp.tanh(1))
    assert mean_curvature_trace(Space(2, 2), 1.0) == pytest.approx(expected, rel=1e-14)
    for s in STANDARD_SPACES:
        assert mean_curvature_trace(s, 40.0) == pytest.approx(s.dim + s.k - 2, rel=1e-14)
    with pytest.raises(ValueError):
        mean_curvature_trace(H2, 0.0)


def test_sphere_lambda1_values():
    r = 1.3
    assert sphere_lambda1(H2, r) == pytest.approx(1 / math.sinh(r) ** 2, rel=1e-15)
    expected = float(3 / mp.sinh(1) ** 2 - 1 / mp.cosh(1) ** 2)
    assert sphere_lambda1(Space(2, 2), 1.0) == pytest.approx(expected, rel=1e-14)
    with pytest.raises(ValueError):
        sphere_lambda1(H2, 0.0)


def test_lambda1_forms_agree_on_random_inputs(rng):
    for _ in range(100):
        s = STANDARD_SPACES[rng.integers(len(STANDARD_SPACES))]
        r = rng.uniform(0.01, 10.0)
        a, b = sphere_lambda1(s, r), sphere_lambda1_alt(s, r)
        assert abs(a - b) <= 1e-13 * abs(b)


@given(spaces, radii)
def test_log_derivative_of_density_is_mean_curvature(s, r):
    fd = central_diff(lambda x: np.log(density(s, x)), r, fd_step(s, r))
    assert fd == pytest.approx(mean_curvature_trace(s, r), rel=1e-8)


@given(spaces, radii)
def test_derivative_of_trace_is_minus_lambda1(s, r):
    fd = central_diff(lambda x: mean_curvature_trace(s, x), r, fd_step(s, r))
    lam = sphere_lambda1(s, r)
    assert abs(fd + lam) <= 1e-8 * max(lam, 1.0)


def test_unit_sphere_area():
    assert unit_sphere_area(2) == pytest.approx(2 * math.pi, rel=1e-15)
    assert unit_sphere_area(3) == pytest.approx(4 * math.pi, rel=1e-15)
    assert unit_sphere_area(4) == pytest.approx(float(2 * mp.pi ** 2), rel=1e-15)
    with pytest.raises(ValueError):
        unit_sphere_area(0)


@pytest.mark.parametrize("r", [0.1, 1.0, 3.0])
def test_ball_volume_closed_forms(r):
    assert ball_volume(H2, r) == pytest.approx(2 * math.pi * (math.cosh(r) - 1), rel=1e-13)
    expected = math.pi * (math.sinh(2 * r) - 2 * r)
    assert ball_volume(Space(1, 3), r) == pytest.approx(expected, rel=1e-12)


def test_ball_volume_flat_limit(space):
    r = 1e-6
    ratio = ball_volume(space, r) / euclidean_ball_volume(space.dim, r)
    assert ratio == pytest.approx(1.0, abs=1e-9)


def test_ball_volume_derivative_matches_sphere_area(space):
    for r in (0.3, 1.0, 2.5):
        fd = central_diff(lambda x: ball_volume(space, x), r, fd_step(space, r))
        assert fd == pytest.approx(sphere_area(space, r), rel=1e-8)


def test_ball_volume_increasing(space):
    r = np.linspace(0.01, 6.0, 400)
    assert np.all(np.diff(ball_volume(space, r)) > 0)


def test_radius_for_volume():
    assert radius_for_volume(H2, 2 * math.pi * (math.cosh(1) - 1)) == pytest.approx(1.0, rel=1e-12)
    assert radius_for_volume(H2, 1e-30) < 1e-14
    with pytest.raises(ValueError):
        radius_for_volume(H2, 0.0)


def test_radius_for_volume_round_trip(space, rng):
    for R in rng.uniform(0.05, 4.0, size=10):
        V = ball_volume(space, R)
        assert radius_for_volume(space, V) == pytest.approx(R, rel=1e-10)
        assert ball_volume(space, radius_for_volume(space, V)) == pytest.approx(V, rel=1e-12)
