"""Closed-form geometry of the noncompact rank-one symmetric spaces.

A space is identified by ``k``, the real dimension of the base algebra
(1 = reals, 2 = complex, 4 = quaternions, 8 = octonions), and the
projective dimension ``n``. The manifold dimension is ``k * n``. Curvature
is normalised so that ``-4 <= K <= -1``; for ``k = 1`` this is the real
hyperbolic space of constant curvature -1.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy.optimize import brentq

from .quadrature import integrate_unit_interval

_NAMES = {1: "RH", 2: "CH", 4: "HH", 8: "CaH"}


@dataclass(frozen=True)
class Space:
    """Noncompact rank-one symmetric space ``KH^n``."""

    k: int
    n: int

    def __post_init__(self):
        if self.k not in (1, 2, 4, 8):
            raise ValueError(f"k must be one of 1, 2, 4, 8, got {self.k}")
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n}")
        if self.k == 8 and self.n != 2:
            raise ValueError("the Cayley hyperbolic space exists only for n = 2")

    @property
    def dim(self):
        return self.k * self.n

    @property
    def name(self):
        return f"{_NAMES[self.k]}^{self.n}"

    @classmethod
    def parse(cls, text):
        """Parse ``"k,n"``."""
        try:
            k, n = (int(part) for part in str(text).split(","))
        except ValueError as exc:
            raise ValueError(f"expected 'k,n', got {text!r}") from exc
        return cls(k, n)

    def __str__(self):
        return self.name


H2 = Space(1, 2)

#: The five instances exercised by the test and acceptance suites.
STANDARD_SPACES = (Space(1, 2), Space(1, 3), Space(2, 2), Space(4, 2), Space(8, 2))


def _radius(r, *, allow_zero):
    r = np.asarray(r, dtype=float)
    if np.any(np.isnan(r)):
        raise ValueError("radius is NaN")
    if allow_zero:
        if np.any(r < 0):
            raise ValueError("geodesic radius must be nonnegative")
    elif np.any(r <= 0):
        raise ValueError("geodesic radius must be positive")
    return r


def density(space, r):
    """Volume density ``sinh^(kn-1)(r) cosh^(k-1)(r)`` of the geodesic sphere."""
    r = _radius(r, allow_zero=True)
    out = np.sinh(r) ** (space.dim - 1) * np.cosh(r) ** (space.k - 1)
    return out[()]


def mean_curvature_trace(space, r):
    """Trace of the second fundamental form of ``S(r)``, i.e. ``phi'/phi``."""
    r = _radius(r, allow_zero=False)
    out = (space.dim - 1) / np.tanh(r) + (space.k - 1) * np.tanh(r)
    return out[()]


def sphere_lambda1(space, r):
    """First nonzero Laplace eigenvalue of the geodesic sphere ``S(r)``."""
    r = _radius(r, allow_zero=False)
    out = (space.dim - 1) / np.sinh(r) ** 2 - (space.k - 1) / np.cosh(r) ** 2
    return out[()]


def sphere_lambda1_alt(space, r):
    """Same eigenvalue written as a sum of positive terms."""
    r = _radius(r, allow_zero=False)
    s2 = np.sinh(r) ** 2
    out = (space.dim - space.k) / s2 + (space.k - 1) / (s2 * np.cosh(r) ** 2)
    return out[()]


def unit_sphere_area(d):
    """Area of the unit sphere in ``R^d``; 2*pi for d = 2."""
    if d < 1:
        raise ValueError("dimension must be at least 1")
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


def density_ratio(space, r, s):
    """``phi(r*s) / phi(r)`` for ``0 < s <= 1`` without overflow or underflow.

    `r` broadcasts against `s`. Uses ``sinh x = -e^x expm1(-2x) / 2`` so
    that large radii and the flat limit are both handled exactly.
    """
    rs = r * s
    log_sinh = r * (s - 1.0) + np.log(np.expm1(-2.0 * rs) / np.expm1(-2.0 * r))
    out = np.exp((space.dim - 1) * log_sinh) if space.dim > 1 else np.ones_like(rs)
    if space.k > 1:
        log_cosh = (r * (s - 1.0) + np.log1p(np.exp(-2.0 * rs))
                    - np.log1p(np.exp(-2.0 * r)))
        out = out * np.exp((space.k - 1) * log_cosh)
    return out


def normalized_density_integral(space, r, rtol=1e-13):
    """``(1/phi(r)) * integral_0^r phi(t) dt`` by adaptive Gauss-Legendre.

    Zero at ``r = 0``. This is the radial profile of the first Steklov
    eigenfunction of the geodesic ball.
    """
    r = _radius(r, allow_zero=True)
    flat = r.ravel()
    out = np.zeros_like(flat)
    pos = flat > 0
    if np.any(pos):
        rp = flat[pos][:, None]
        panels = max(1, int(np.ceil(np.max(rp) * (space.dim + space.k) / 8.0)))
        integral = integrate_unit_interval(
            lambda s: density_ratio(space, rp, s[None, :]), rtol=rtol,
            panels=panels)
        out[pos] = flat[pos] * integral
    return out.reshape(r.shape)[()]


def sphere_area(space, r):
    """Area of the geodesic sphere of radius `r`."""
    _radius(r, allow_zero=False)
    return unit_sphere_area(space.dim) * density(space, r)


def ball_volume(space, r):
    """Volume of the geodesic ball of radius `r`."""
    r = _radius(r, allow_zero=False)
    g = normalized_density_integral(space, r)
    return unit_sphere_area(space.dim) * density(space, r) * g


def euclidean_ball_volume(d, r):
    return unit_sphere_area(d) * np.asarray(r, dtype=float) ** d / d


def radius_for_volume(space, volume):
    """Radius of the geodesic ball with the given volume (bracketed Brent)."""
    if not volume > 0:
        raise ValueError("volume must be positive")

    def residual(radius):
        if radius == 0.0:
            return -1.0
        return ball_volume(space, radius) / volume - 1.0

    hi = 1.0
    while residual(hi) < 0:
        hi *= 2.0
    lo = hi / 2.0
    while lo > 1e-300 and residual(lo) > 0:
        lo /= 2.0
    return brentq(residual, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps,
                  maxiter=500)
