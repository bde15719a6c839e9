import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import central_diff, fd_step
from steklovkit.ball_spectrum import (
    ball_spectrum,
    harmonic_sum_ball,
    lemma53_check,
    mu1_ball_boundary,
    mu1_ball_quotient,
    radial_energy,
    radial_g,
    radial_g_prime,
    theorem_l,
)
from steklovkit.hyperbolic_domain import StarDomain, area, boundary_quadrature
from steklovkit.symmetric_space import (
    H2,
    STANDARD_SPACES,
    Space,
    mean_curvature_trace,
    radius_for_volume,
    sphere_lambda1,
)

mp.mp.dps = 30


def test_g_h2_closed_form():
    r = np.linspace(0.0, 10.0, 201)
    assert np.max(np.abs(radial_g(H2, r) - np.tanh(r / 2))) <= 1e-12
    assert radial_g(H2, 0.0) == 0.0


def test_g_small_radius_limit(space):
    r = 1e-7
    assert radial_g(space, r) / r == pytest.approx(1 / space.dim, rel=1e-9)


def test_g_against_independent_high_precision_quadrature():
    s = Space(2, 2)
    phi = lambda t: mp.sinh(t) ** 3 * mp.cosh(t)  # noqa: E731
    expected = float(mp.quad(phi, [0, 1]) / phi(1))
    assert radial_g(s, 1.0) == pytest.approx(expected, rel=1e-12)


def test_g_prime_h2_closed_form():
    r = np.linspace(0.05, 8.0, 100)
    expected = 0.5 / np.cosh(r / 2) ** 2
    assert np.max(np.abs(radial_g_prime(H2, r) - expected)) <= 1e-12


def test_g_prime_limit(space):
    assert radial_g_prime(space, 0.0) == 1 / space.dim
    assert radial_g_prime(space, 1e-6) == pytest.approx(1 / space.dim, rel=1e-9)


@given(st.sampled_from(STANDARD_SPACES), st.floats(min_value=0.02, max_value=6.0))
def test_g_prime_matches_finite_difference(s, r):
    fd = central_diff(lambda x: radial_g(s, x), r, fd_step(s, r))
    assert fd == pytest.approx(radial_g_prime(s, r), abs=1e-8)


def test_radial_ode_residual(space):
    r = np.geomspace(1e-2, 10.0, 300)
    h = np.array([fd_step(space, x) for x in r])
    gpp = central_diff(lambda x: radial_g_prime(space, x), r, h)
    residual = gpp + mean_curvature_trace(space, r) * radial_g_prime(space, r) \
        - sphere_lambda1(space, r) * radial_g(space, r)
    assert np.max(np.abs(residual)) <= 1e-9


@pytest.mark.parametrize("R", [0.25, 0.5, 1.0, 2.0, 4.0])
def test_mu1_boundary_h2(R):
    assert mu1_ball_boundary(H2, R) == pytest.approx(1 / math.sinh(R), rel=1e-10)


def test_mu1_boundary_value_at_one():
    assert mu1_ball_boundary(H2, 1.0) == pytest.approx(float(1 / mp.sinh(1)), rel=1e-12)
    assert round(mu1_ball_boundary(H2, 1.0), 6) == 0.850918


def test_mu1_flat_limit(space):
    R = 1e-5
    assert mu1_ball_boundary(space, R) * R == pytest.approx(1.0, rel=1e-8)


@pytest.mark.parametrize("R", [0.3, 1.0, 2.0, 3.0])
def test_rayleigh_quotient_matches_boundary_quotient(space, R):
    a, b = mu1_ball_quotient(space, R), mu1_ball_boundary(space, R)
    assert abs(a - b) <= 1e-8 * b


def test_mu1_large_radius_bounded(space):
    mu = mu1_ball_boundary(space, np.array([2.0, 4.0, 8.0]))
    assert np.all(mu > 0)
    assert np.all(mu < space.dim + space.k - 2)
    assert np.all(np.diff(mu) < 0)


def test_radial_energy_h2_closed_form():
    r = np.linspace(0.05, 6.0, 50)
    expected = 0.25 / np.cosh(r / 2) ** 4 + np.tanh(r / 2) ** 2 / np.sinh(r) ** 2
    assert np.max(np.abs(radial_energy(H2, r) - expected) / expected) <= 1e-12


def test_radial_energy_small_radius_limit(space):
    # series: g ~ r/kn, g' ~ 1/kn, lambda_1 ~ (kn-1)/r^2 so h -> 1/kn
    assert radial_energy(space, 1e-5) == pytest.approx(1 / space.dim, rel=1e-8)


def test_radial_energy_decreasing(space, rng):
    r = np.geomspace(1e-3, 10.0, 1000)
    assert np.all(np.diff(radial_energy(space, r)) < 0)
    x = rng.uniform(0.01, 5.0, size=50)
    assert np.all(radial_energy(space, 2 * x) < radial_energy(space, x))


@pytest.mark.parametrize("k,n,l", [(1, 3, 2), (2, 2, 2), (1, 1, 0), (1, 2, 1), (2, 1, 1),
                                   (4, 2, 4), (8, 2, 8), (4, 1, 3)])
def test_theorem_l(k, n, l):
    assert theorem_l(Space(k, n)) == l
    assert theorem_l(Space(k, n)) <= k * n


def test_harmonic_sum_ball():
    R = 1.3
    assert harmonic_sum_ball(H2, R, 1) == pytest.approx(math.sinh(R), rel=1e-10)
    assert harmonic_sum_ball(H2, R, 2) == pytest.approx(2 * math.sinh(R), rel=1e-10)
    assert harmonic_sum_ball(H2, R, 0) == 0.0
    with pytest.raises(ValueError):
        harmonic_sum_ball(H2, R, 3)


def test_harmonic_sum_flat_limit(space):
    R = 1e-5
    assert harmonic_sum_ball(space, R, space.dim) == pytest.approx(space.dim * R, rel=1e-8)


def test_ball_spectrum_invariants(space):
    b = ball_spectrum(space, 1.2)
    assert b.mu1 > 0 and b.g_at_R > 0
    assert abs(b.mu1 * b.g_at_R - b.g_prime_at_R) <= 1e-10 * b.g_prime_at_R
    assert b.to_dict()["space"] == [space.k, space.n]


def test_boundary_bound_ball_equality():
    R = 0.9
    quad = boundary_quadrature(StarDomain.ball(R), 256)
    verdict = lemma53_check(quad.integrate(quad.g ** 2), H2, R)
    assert abs(verdict.slack) <= 1e-9
    assert verdict.holds
    assert verdict.relative_slack == pytest.approx(verdict.slack / verdict.ball_value)


def test_boundary_bound_perturbed_ball_strict():
    dom = StarDomain.perturbed_ball(1.0, 0.1)
    R = radius_for_volume(H2, area(dom))
    quad = boundary_quadrature(dom, 512)
    verdict = lemma53_check(quad.integrate(quad.g ** 2), H2, R)
    assert verdict.slack > 1e-4
    assert verdict.holds
