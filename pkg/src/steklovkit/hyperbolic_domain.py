"""Star-shaped domains in the hyperbolic plane.

A domain is given by its geodesic polar radius ``r(theta)`` about a base
point of the Poincare disk, written as a finite Fourier series. Angles at
the base point are measured after the Mobius translation carrying the
origin to the base point; that map has a positive real derivative at 0, so
disk-model directions are preserved.
"""

from dataclasses import dataclass, field, replace
import json

import numpy as np

from .ball_spectrum import radial_g
from .quadrature import trapezoid_nodes
from .symmetric_space import H2

DEFAULT_NODES = 512


class DomainError(ValueError):
    """Invalid domain specification."""


def mobius_to(a, w):
    """Isometry of the disk sending 0 to `a`: ``(w + a) / (1 + conj(a) w)``."""
    return (w + a) / (1.0 + np.conj(a) * w)


def mobius_from(a, z):
    """Inverse of :func:`mobius_to`; sends `a` to 0."""
    return (z - a) / (1.0 - np.conj(a) * z)


def _as_complex(z):
    if isinstance(z, (tuple, list)):
        return complex(*z)
    return z


def hyperbolic_distance(z1, z2):
    """Geodesic distance in the disk; points are complex or ``(x, y)`` pairs."""
    return 2.0 * np.arctanh(np.abs(mobius_from(_as_complex(z1), _as_complex(z2))))


def conformal_factor(z):
    """Density ``2 / (1 - |z|^2)`` of the hyperbolic metric in the disk."""
    return 2.0 / (1.0 - np.abs(z) ** 2)


def _tuple(values):
    return tuple(float(v) for v in values)


@dataclass(frozen=True)
class StarDomain:
    """``r(theta) = c0 + sum_m a_m cos(m theta) + b_m sin(m theta)`` about `base_point`."""

    base_point: tuple = (0.0, 0.0)
    c0: float = 1.0
    cos: tuple = ()
    sin: tuple = ()
    fit_residual: float = field(default=0.0, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "base_point", _tuple(self.base_point))
        object.__setattr__(self, "cos", _tuple(self.cos))
        object.__setattr__(self, "sin", _tuple(self.sin))
        object.__setattr__(self, "c0", float(self.c0))
        if len(self.base_point) != 2:
            raise DomainError("base_point must be a pair of reals")
        if not np.all(np.isfinite(self.base_point + self.cos + self.sin + (self.c0,))):
            raise DomainError("domain coefficients must be finite")
        if abs(self.base) >= 1.0:
            raise DomainError("base_point must lie strictly inside the unit disk")
        grid = np.linspace(0.0, 2.0 * np.pi, 2048 + 16 * self.max_harmonic,
                           endpoint=False)
        rmin = np.min(self.radius(grid))
        if not rmin > 0:
            raise DomainError(f"radius function must be positive (min {rmin:.3g})")

    @property
    def base(self):
        return complex(*self.base_point)

    @property
    def max_harmonic(self):
        return max(len(self.cos), len(self.sin))

    @classmethod
    def ball(cls, R, base_point=(0.0, 0.0)):
        return cls(base_point=base_point, c0=R)

    @classmethod
    def perturbed_ball(cls, R0, eps, mode=2, base_point=(0.0, 0.0)):
        """``r(theta) = R0 (1 + eps cos(mode theta))``."""
        cos = [0.0] * mode
        cos[mode - 1] = R0 * eps
        return cls(base_point=base_point, c0=R0, cos=cos)

    def _harmonics(self, theta, order=0):
        theta = np.asarray(theta, dtype=float)
        H = self.max_harmonic
        coeffs = np.zeros(H + 1, dtype=complex)
        coeffs[0] = self.c0
        coeffs[1:len(self.cos) + 1] += self.cos
        coeffs[1:len(self.sin) + 1] -= 1j * np.asarray(self.sin)
        if order:
            coeffs = coeffs * (1j * np.arange(H + 1)) ** order
        # r(theta) = Re sum_m (a_m - i b_m) e^{i m theta}, Horner in e^{i theta}
        z = np.exp(1j * theta)
        acc = np.full(theta.shape, coeffs[-1])
        for c in coeffs[-2::-1]:
            acc = acc * z + c
        return acc.real

    def radius(self, theta):
        return self._harmonics(theta, 0)[()]

    def radius_derivative(self, theta, order=1):
        return self._harmonics(theta, order)[()]

    def rotated(self, alpha):
        """Same domain rotated by `alpha` about the base point."""
        cos, sin = [], []
        for m in range(1, self.max_harmonic + 1):
            a = self.cos[m - 1] if m <= len(self.cos) else 0.0
            b = self.sin[m - 1] if m <= len(self.sin) else 0.0
            c, s = np.cos(m * alpha), np.sin(m * alpha)
            cos.append(a * c - b * s)
            sin.append(a * s + b * c)
        return replace(self, cos=cos, sin=sin)

    def to_dict(self):
        return {"base_point": list(self.base_point), "c0": self.c0,
                "cos": list(self.cos), "sin": list(self.sin)}

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise DomainError("domain spec must be a JSON object")
        unknown = set(data) - {"base_point", "c0", "cos", "sin"}
        if unknown:
            raise DomainError(f"unknown domain keys: {sorted(unknown)}")
        if "c0" not in data:
            raise DomainError("domain spec requires 'c0'")
        try:
            return cls(base_point=data.get("base_point", (0.0, 0.0)), c0=data["c0"],
                       cos=data.get("cos", ()), sin=data.get("sin", ()))
        except (TypeError, ValueError) as exc:
            if isinstance(exc, DomainError):
                raise
            raise DomainError(f"malformed domain spec: {exc}") from exc


def parse_domain(text):
    """Parse a JSON domain spec. Syntax errors keep their line and column."""
    return StarDomain.from_dict(json.loads(text))


def load_domain(path):
    with open(path, encoding="utf-8") as fh:
        return parse_domain(fh.read())


def area(domain, nodes=DEFAULT_NODES):
    """Hyperbolic area ``int (cosh r(theta) - 1) dtheta``."""
    theta, w = trapezoid_nodes(nodes)
    r = domain.radius(theta)
    # cosh r - 1 without cancellation for small r
    return float(w * np.sum(2.0 * np.sinh(r / 2.0) ** 2))


def perimeter(domain, nodes=DEFAULT_NODES):
    """Hyperbolic length of the boundary ``int sqrt(r'^2 + sinh^2 r) dtheta``."""
    theta, w = trapezoid_nodes(nodes)
    return float(w * np.sum(_arclength_density(domain, theta)))


def _arclength_density(domain, theta):
    r = domain.radius(theta)
    dr = domain.radius_derivative(theta)
    return np.hypot(dr, np.sinh(r))


@dataclass(frozen=True)
class BoundaryQuadrature:
    """Periodic trapezoid rule on the boundary, nodes uniform in the polar angle.

    ``directions[:, i]`` is the coordinate function ``x_i / r`` about the base
    point; ``g`` is the radial profile at the node's distance from it.
    """

    theta: np.ndarray
    radius: np.ndarray
    points: np.ndarray
    weights: np.ndarray
    g: np.ndarray
    directions: np.ndarray

    @property
    def count(self):
        return len(self.theta)

    def integrate(self, values):
        return np.asarray(values) @ self.weights


def boundary_quadrature(domain, m=DEFAULT_NODES):
    if m < 16 or m % 2:
        raise ValueError("boundary node count must be even and at least 16")
    theta, w = trapezoid_nodes(m)
    r = domain.radius(theta)
    return BoundaryQuadrature(
        theta=theta,
        radius=r,
        points=mobius_to(domain.base, np.tanh(r / 2.0) * np.exp(1j * theta)),
        weights=w * _arclength_density(domain, theta),
        g=radial_g(H2, r),
        directions=np.stack([np.cos(theta), np.sin(theta)], axis=1),
    )


def disk_curve(domain, theta, centered=False):
    """Boundary in the disk model with its first two theta-derivatives.

    With ``centered=True`` the base point is moved to the origin.
    """
    theta = np.asarray(theta, dtype=float)
    r = domain.radius(theta)
    dr = domain.radius_derivative(theta, 1)
    ddr = domain.radius_derivative(theta, 2)
    s = np.tanh(r / 2.0)
    ds = 0.5 * (1.0 - s ** 2) * dr
    dds = 0.5 * ((1.0 - s ** 2) * ddr - 2.0 * s * ds * dr)
    e = np.exp(1j * theta)
    w = s * e
    dw = (ds + 1j * s) * e
    ddw = (dds + 2j * ds - s) * e
    if centered or domain.base == 0:
        return w, dw, ddw
    a = domain.base
    denom = 1.0 + np.conj(a) * w
    t1 = (1.0 - abs(a) ** 2) / denom ** 2
    t2 = -2.0 * np.conj(a) * (1.0 - abs(a) ** 2) / denom ** 3
    return mobius_to(a, w), t1 * dw, t2 * dw ** 2 + t1 * ddw


def to_disk_model(domain, m=DEFAULT_NODES):
    """Boundary points in the Poincare disk at ``m`` uniform polar angles."""
    theta, _ = trapezoid_nodes(m)
    return disk_curve(domain, theta)[0]


def geodesic_curvature(domain, theta):
    """Hyperbolic geodesic curvature of the boundary (positive for a ball).

    Uses ``kappa_g = (kappa_e + d log(rho)/d nu) / rho`` with ``nu`` the
    outward Euclidean normal and ``rho`` the conformal factor.
    """
    z, dz, ddz = disk_curve(domain, theta)
    speed = np.abs(dz)
    kappa_e = np.imag(np.conj(dz) * ddz) / speed ** 3
    normal = -1j * dz / speed
    grad_log_rho = 2.0 * z / (1.0 - np.abs(z) ** 2)
    dlogrho = np.real(np.conj(grad_log_rho) * normal)
    return ((kappa_e + dlogrho) / conformal_factor(z))[()]


def is_convex(domain, grid=4096, tol=1e-10):
    theta = np.linspace(0.0, 2.0 * np.pi, grid, endpoint=False)
    return bool(np.min(geodesic_curvature(domain, theta)) >= -tol)


def contains(domain, p):
    """True if the disk point `p` lies strictly inside the domain."""
    w = mobius_from(domain.base, complex(*p))
    if w == 0:
        return True
    return bool(2.0 * np.arctanh(abs(w)) < domain.radius(np.angle(w)))


def _angle_about(domain, p, theta):
    """Polar angle and geodesic radius about `p` of the boundary points, plus d(angle)/dtheta."""
    z, dz, _ = disk_curve(domain, theta)
    w = mobius_from(p, z)
    dw = (1.0 - abs(p) ** 2) / (1.0 - np.conj(p) * z) ** 2 * dz
    return np.angle(w), 2.0 * np.arctanh(np.abs(w)), np.imag(dw / w)


def _radius_about(domain, p, phi):
    """Geodesic radius about `p` of the boundary in the directions `phi`."""
    dense = np.linspace(0.0, 2.0 * np.pi, max(4096, 4 * len(phi)), endpoint=False)
    ang, _, rate = _angle_about(domain, p, dense)
    if np.min(rate) <= 0:
        raise DomainError("domain is not star-shaped about the requested point")
    unwrapped = np.unwrap(ang)
    unwrapped = unwrapped - 2.0 * np.pi * np.floor(unwrapped[0] / (2.0 * np.pi))
    lead = unwrapped[0]
    ext_phi = np.concatenate([unwrapped, [unwrapped[0] + 2.0 * np.pi]])
    ext_theta = np.concatenate([dense, [2.0 * np.pi]])
    target = lead + np.mod(phi - lead, 2.0 * np.pi)
    theta = np.interp(target, ext_phi, ext_theta)
    for _ in range(30):
        ang, _, rate = _angle_about(domain, p, theta)
        delta = np.angle(np.exp(1j * (ang - target))) / rate
        theta = theta - delta
        if np.max(np.abs(delta)) < 1e-15:
            break
    return _angle_about(domain, p, theta)[1]


def recenter(domain, p, samples=4096, tol=1e-13, max_harmonic_cap=1024):
    """Re-express the domain as star-shaped about the disk point `p`.

    The new radius is sampled densely and refit as a Fourier series. The
    harmonic count starts at twice the current one and doubles until the
    off-grid fit residual drops below `tol` (or the cap is hit); the
    achieved residual is stored on the result as ``fit_residual``.
    """
    p = complex(*p)
    if not contains(domain, (p.real, p.imag)):
        raise DomainError("recentring point must lie strictly inside the domain")
    if abs(p - domain.base) == 0:
        return domain
    phi, _ = trapezoid_nodes(samples)
    values = _radius_about(domain, p, phi)
    mid = phi + np.pi / samples
    mid_values = _radius_about(domain, p, mid)
    spectrum = np.fft.rfft(values) / samples
    harmonics = max(8, 2 * domain.max_harmonic)
    while True:
        coeffs = spectrum[1:harmonics + 1]
        candidate = StarDomain(base_point=(p.real, p.imag), c0=spectrum[0].real,
                               cos=2.0 * coeffs.real, sin=-2.0 * coeffs.imag)
        residual = float(np.max(np.abs(candidate.radius(mid) - mid_values)))
        if residual <= tol or harmonics >= min(max_harmonic_cap, samples // 4):
            return replace(candidate, fit_residual=residual)
        harmonics *= 2
