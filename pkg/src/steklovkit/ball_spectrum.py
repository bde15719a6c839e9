"""First Steklov eigenvalue of geodesic balls and the radial profile ``g``."""

from dataclasses import dataclass

import numpy as np

from .quadrature import integrate_unit_interval
from .symmetric_space import (
    ball_volume,
    density_ratio,
    mean_curvature_trace,
    normalized_density_integral,
    sphere_area,
    sphere_lambda1,
)


def radial_g(space, r):
    """Radial profile ``g(r) = (1/phi(r)) * int_0^r phi``; ``g(0) = 0``."""
    return normalized_density_integral(space, r)


def radial_g_prime(space, r):
    """``g'(r) = 1 - Tr A(r) g(r)``, with the limit ``1/(kn)`` at the pole."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("geodesic radius must be nonnegative")
    out = np.full(r.shape, 1.0 / space.dim)
    pos = r > 0
    if np.any(pos):
        rp = r[pos]
        out[pos] = 1.0 - mean_curvature_trace(space, rp) * radial_g(space, rp)
    return out[()]


def mu1_ball_boundary(space, R):
    """First nonzero Steklov eigenvalue of ``B(R)`` as ``g'(R) / g(R)``."""
    R = np.asarray(R, dtype=float)
    if np.any(R <= 0):
        raise ValueError("ball radius must be positive")
    return (radial_g_prime(space, R) / radial_g(space, R))[()]


def radial_energy(space, r):
    """``h(r) = g'(r)^2 + g(r)^2 lambda_1(S(r))``, decreasing in r."""
    g = radial_g(space, r)
    gp = radial_g_prime(space, r)
    return (gp ** 2 + g ** 2 * sphere_lambda1(space, r))[()]


def ball_energy_integral(space, R):
    """``int_{B(R)} h dV`` divided by ``vol(S(R))`` (dimensionless in R)."""
    if R <= 0:
        raise ValueError("ball radius must be positive")

    def integrand(s):
        return radial_energy(space, R * s) * density_ratio(space, R, s)

    return R * integrate_unit_interval(integrand, rtol=1e-13, panels=4)


def mu1_ball_quotient(space, R):
    """First Steklov eigenvalue of ``B(R)`` from the Rayleigh quotient of ``g x_i/r``.

    Independent of :func:`mu1_ball_boundary`; the two agree through the
    radial ODE and an integration by parts.
    """
    return float(ball_energy_integral(space, R) / radial_g(space, R) ** 2)


def theorem_l(space):
    """Number of reciprocal eigenvalues in the harmonic-mean bound."""
    if space.n == 1:
        return space.k - 1
    return space.k * (space.n - 1)


def harmonic_sum_ball(space, R, l):
    """``sum_{i=1}^l 1/mu_i(B(R))``; the first ``kn`` nonzero eigenvalues coincide."""
    if l < 0 or l > space.dim:
        raise ValueError(
            f"l must lie in [0, {space.dim}]; beyond kn the ball eigenvalues differ")
    if l == 0:
        return 0.0
    return float(l / mu1_ball_boundary(space, R))


@dataclass(frozen=True)
class BallSpectrum:
    space: object
    R: float
    mu1: float
    g_at_R: float
    g_prime_at_R: float
    volume: float
    boundary_area: float

    def to_dict(self):
        return {
            "space": [self.space.k, self.space.n],
            "R": self.R,
            "mu1": self.mu1,
            "g": self.g_at_R,
            "g_prime": self.g_prime_at_R,
            "volume": self.volume,
            "boundary_area": self.boundary_area,
        }


def ball_spectrum(space, R):
    g = float(radial_g(space, R))
    gp = float(radial_g_prime(space, R))
    return BallSpectrum(
        space=space,
        R=float(R),
        mu1=gp / g,
        g_at_R=g,
        g_prime_at_R=gp,
        volume=float(ball_volume(space, R)),
        boundary_area=float(sphere_area(space, R)),
    )


@dataclass(frozen=True)
class BoundaryBoundVerdict:
    """Comparison ``int_{dOmega} g^2 dA`` against ``vol(S(R)) g(R)^2``."""

    boundary_integral: float
    ball_value: float
    slack: float
    relative_slack: float
    holds: bool


def lemma53_check(boundary_integral, space, R, tol=1e-9):
    ball_value = float(sphere_area(space, R) * radial_g(space, R) ** 2)
    slack = float(boundary_integral) - ball_value
    rel = slack / ball_value
    return BoundaryBoundVerdict(
        boundary_integral=float(boundary_integral),
        ball_value=ball_value,
        slack=slack,
        relative_slack=rel,
        holds=rel >= -tol,
    )
