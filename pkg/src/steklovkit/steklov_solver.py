"""Steklov spectra of planar domains by a harmonic-polynomial Galerkin method.

In two dimensions the Dirichlet energy is conformally invariant, so the
hyperbolic Steklov problem on a domain of the Poincare disk is the
Euclidean one with boundary density ``rho = 2 / (1 - |z|^2)``:

    Delta u = 0 inside,    du/dnu = mu * rho * u on the boundary,

with ``dnu`` the Euclidean normal derivative. For harmonic test functions
the stiffness matrix is ``K_ab = oint u_a du_b/dnu ds`` and the mass
matrix is ``M_ab = oint u_a u_b rho ds``.
"""

from dataclasses import dataclass, field
import enum

import numpy as np
from scipy import linalg

from .hyperbolic_domain import StarDomain, disk_curve, mobius_from
from .quadrature import trapezoid_nodes

MAX_CONDITION = 1e12


class MetricMode(str, enum.Enum):
    EUCLIDEAN = "euclidean"
    HYPERBOLIC = "hyperbolic"


class IllConditionedError(RuntimeError):
    pass


@dataclass(frozen=True)
class BoundaryCurve:
    """Closed counter-clockwise curve ``z(t)``, ``t`` in ``[0, 2 pi)``.

    `center` is the point that solver coordinates are taken about; in
    hyperbolic mode it is moved to the origin by a Mobius map, in
    Euclidean mode by a translation.
    """

    z: object
    dz: object
    center: complex = 0j
    label: str = "curve"

    def sample(self, m):
        t, w = trapezoid_nodes(m)
        return t, np.asarray(self.z(t), dtype=complex), np.asarray(self.dz(t), dtype=complex), w

    @classmethod
    def circle(cls, radius, center=0j):
        center = complex(center)
        return cls(z=lambda t: center + radius * np.exp(1j * t),
                   dz=lambda t: 1j * radius * np.exp(1j * t),
                   center=center, label=f"circle(r={radius})")

    @classmethod
    def ellipse(cls, a, b, center=0j, angle=0.0):
        center = complex(center)
        rot = np.exp(1j * angle)
        return cls(z=lambda t: center + rot * (a * np.cos(t) + 1j * b * np.sin(t)),
                   dz=lambda t: rot * (-a * np.sin(t) + 1j * b * np.cos(t)),
                   center=center, label=f"ellipse(a={a}, b={b})")

    @classmethod
    def euclidean_star(cls, domain):
        """Read a :class:`StarDomain`'s radius as a Euclidean polar radius."""
        c = domain.base

        def z(t):
            return c + domain.radius(t) * np.exp(1j * t)

        def dz(t):
            return (domain.radius_derivative(t) + 1j * domain.radius(t)) * np.exp(1j * t)

        return cls(z=z, dz=dz, center=c, label="euclidean-star")

    @classmethod
    def disk_model(cls, domain):
        return cls(z=lambda t: disk_curve(domain, t)[0],
                   dz=lambda t: disk_curve(domain, t)[1],
                   center=domain.base, label="disk-model")

    def euclidean_area(self, m=2048):
        _, z, dz, w = self.sample(m)
        return float(0.5 * w * np.sum(np.imag(np.conj(z) * dz)))

    def euclidean_perimeter(self, m=2048):
        _, _, dz, w = self.sample(m)
        return float(w * np.sum(np.abs(dz)))


def as_curve(domain, mode):
    mode = MetricMode(mode)
    if isinstance(domain, BoundaryCurve):
        return domain
    if isinstance(domain, StarDomain):
        if mode is MetricMode.HYPERBOLIC:
            return BoundaryCurve.disk_model(domain)
        return BoundaryCurve.euclidean_star(domain)
    raise TypeError(f"cannot build a boundary curve from {type(domain).__name__}")


def _local(curve, mode, z):
    """Coordinates of `z` in the frame where the curve's center is the origin."""
    if mode is MetricMode.HYPERBOLIC:
        return mobius_from(curve.center, z)
    return z - curve.center


def default_nodes(degree):
    return max(64, 8 * degree + (8 * degree) % 2)


class HarmonicBasis:
    """Real harmonic polynomials ``Re p_j, Im p_j`` of degree at most N.

    ``"arnoldi"`` orthonormalises the complex monomials on the boundary
    nodes (Vandermonde with Arnoldi) and replays the recurrence at new
    points; ``"monomial"`` uses ``(z/s)^j`` with ``s`` the largest boundary
    modulus. Both span ``{1, Re z^j, Im z^j : j <= N}``.
    """

    def __init__(self, degree, z_nodes, weights, kind="arnoldi"):
        if kind not in ("arnoldi", "monomial"):
            raise ValueError(f"unknown basis kind {kind!r}")
        self.degree = degree
        self.kind = kind
        self.scale = float(np.max(np.abs(z_nodes)))
        if kind == "arnoldi":
            self.hessenberg = self._arnoldi(z_nodes, weights)

    @property
    def size(self):
        return 2 * self.degree + 1

    def _arnoldi(self, z, w):
        N = self.degree
        Q = np.zeros((len(z), N + 1), dtype=complex)
        H = np.zeros((N + 1, N), dtype=complex)
        self.q0 = 1.0 / np.sqrt(np.sum(w))
        Q[:, 0] = self.q0
        for k in range(N):
            v = z * Q[:, k]
            for _ in range(2):
                coef = (np.conj(Q[:, :k + 1]).T * w) @ v
                v = v - Q[:, :k + 1] @ coef
                H[:k + 1, k] += coef
            H[k + 1, k] = np.sqrt(np.sum(w * np.abs(v) ** 2))
            Q[:, k + 1] = v / H[k + 1, k]
        return H

    def complex_values(self, z):
        """Complex polynomials ``p_j`` and derivatives at `z`, shape ``(len(z), N+1)``."""
        z = np.asarray(z, dtype=complex)
        N = self.degree
        P = np.zeros((len(z), N + 1), dtype=complex)
        dP = np.zeros_like(P)
        if self.kind == "monomial":
            u = z / self.scale
            P[:, 0] = 1.0
            for j in range(1, N + 1):
                P[:, j] = P[:, j - 1] * u
                dP[:, j] = j * P[:, j - 1] / self.scale
            return P, dP
        H = self.hessenberg
        P[:, 0] = self.q0
        for k in range(N):
            v = z * P[:, k] - P[:, :k + 1] @ H[:k + 1, k]
            dv = P[:, k] + z * dP[:, k] - dP[:, :k + 1] @ H[:k + 1, k]
            P[:, k + 1] = v / H[k + 1, k]
            dP[:, k + 1] = dv / H[k + 1, k]
        return P, dP

    def values(self, z, normal=None):
        """Real basis values at `z`; with `normal` also normal derivatives."""
        P, dP = self.complex_values(z)
        cols = [P[:, 0].real]
        for j in range(1, self.degree + 1):
            cols.extend([P[:, j].real, P[:, j].imag])
        V = np.stack(cols, axis=1)
        if normal is None:
            return V
        g = dP * normal[:, None]
        dcols = [g[:, 0].real]
        for j in range(1, self.degree + 1):
            dcols.extend([g[:, j].real, g[:, j].imag])
        return V, np.stack(dcols, axis=1)


@dataclass
class Assembly:
    K: np.ndarray
    M: np.ndarray
    basis: HarmonicBasis
    theta: np.ndarray
    points: np.ndarray
    local_points: np.ndarray
    ds: np.ndarray
    rho: np.ndarray
    values: np.ndarray
    normal_derivatives: np.ndarray
    asymmetry: float
    condition: float
    mode: MetricMode
    curve: BoundaryCurve

    @property
    def boundary_weights(self):
        """Boundary measure ``dA`` of the metric in use at each node."""
        return self.rho * self.ds


def assemble(domain, mode, degree, nodes=None, basis="arnoldi"):
    """Stiffness and mass matrices of the harmonic-polynomial Galerkin method."""
    mode = MetricMode(mode)
    if degree < 4:
        raise ValueError("basis degree must be at least 4")
    curve = as_curve(domain, mode)
    m = default_nodes(degree) if nodes is None else nodes
    theta, z, dz, w = curve.sample(m)
    zl = _local(curve, mode, z)
    if mode is MetricMode.HYPERBOLIC:
        if np.max(np.abs(z)) >= 1.0:
            raise ValueError("hyperbolic mode needs the boundary strictly inside the unit disk")
        # tangent in the local frame: chain rule through the Mobius map
        dzl = (1.0 - abs(curve.center) ** 2) / (1.0 - np.conj(curve.center) * z) ** 2 * dz
        rho = 2.0 / (1.0 - np.abs(zl) ** 2)
    else:
        dzl = dz
        rho = np.ones(m)
    speed = np.abs(dzl)
    ds = w * speed
    normal = -1j * dzl / speed
    hb = HarmonicBasis(degree, zl, rho * ds, kind=basis)
    V, D = hb.values(zl, normal)
    K_raw = V.T @ (ds[:, None] * D)
    M = V.T @ ((rho * ds)[:, None] * V)
    norm = np.linalg.norm(K_raw)
    asym = float(np.linalg.norm(K_raw - K_raw.T) / norm) if norm else 0.0
    K = 0.5 * (K_raw + K_raw.T)
    M = 0.5 * (M + M.T)
    cond = float(np.linalg.cond(M))
    if not cond < MAX_CONDITION:
        raise IllConditionedError(
            f"mass matrix condition estimate {cond:.2e} exceeds {MAX_CONDITION:.0e}; "
            f"lower the basis degree (currently {degree}) or use the arnoldi basis")
    return Assembly(K=K, M=M, basis=hb, theta=theta, points=z, local_points=zl, ds=ds,
                    rho=rho, values=V, normal_derivatives=D, asymmetry=asym,
                    condition=cond, mode=mode, curve=curve)


@dataclass
class SteklovSpectrum:
    """Galerkin Steklov eigenpairs, ``eigenvalues[0]`` being the constant mode."""

    eigenvalues: np.ndarray
    coefficients: np.ndarray
    boundary_traces: np.ndarray
    degree: int
    residuals: np.ndarray
    residual_estimate: float
    assembly: Assembly = field(repr=False)

    @property
    def mode(self):
        return self.assembly.mode

    @property
    def node_count(self):
        return len(self.assembly.theta)

    @property
    def mu0(self):
        return float(self.eigenvalues[0])

    @property
    def nonzero(self):
        return self.eigenvalues[1:]

    def mu(self, i):
        return float(self.eigenvalues[i])

    def evaluate(self, z, indices=None):
        """Eigenfunctions (harmonic extensions) at absolute points `z`."""
        a = self.assembly
        zl = _local(a.curve, a.mode, np.asarray(z, dtype=complex))
        coef = self.coefficients if indices is None else self.coefficients[:, indices]
        return a.basis.values(zl) @ coef

    def to_dict(self, count=None):
        count = len(self.eigenvalues) if count is None else min(count, len(self.eigenvalues))
        return {
            "mode": self.mode.value,
            "degree": self.degree,
            "node_count": self.node_count,
            "eigenvalues": [float(v) for v in self.eigenvalues[:count]],
            "residuals": [float(v) for v in self.residuals[:count]],
            "residual_estimate": self.residual_estimate,
            "condition": self.assembly.condition,
            "asymmetry": self.assembly.asymmetry,
        }


def solve_generalized(K, M):
    """``K c = mu M c`` by Cholesky reduction of M and a symmetric eigensolver."""
    L = linalg.cholesky(M, lower=True)
    C = linalg.solve_triangular(L, K, lower=True)
    C = linalg.solve_triangular(L, C.T, lower=True).T
    C = 0.5 * (C + C.T)
    mu, Y = linalg.eigh(C)
    X = linalg.solve_triangular(L.T, Y, lower=False)
    return mu, X


def solve_spectrum(domain, mode, degree, nodes=None, basis="arnoldi", residual_modes=4):
    asm = assemble(domain, mode, degree, nodes=nodes, basis=basis)
    mu, X = solve_generalized(asm.K, asm.M)
    order = np.argsort(mu, kind="stable")
    mu, X = mu[order], X[:, order]
    # deterministic sign: largest-magnitude boundary value positive
    U = asm.values @ X
    pivot = np.argmax(np.abs(U), axis=0)
    signs = np.sign(U[pivot, np.arange(U.shape[1])])
    signs[signs == 0] = 1.0
    X = X * signs
    U = U * signs
    dA = asm.boundary_weights
    flux = asm.normal_derivatives @ X / asm.rho[:, None]
    defect = flux - U * mu
    residuals = np.sqrt(np.sum(dA[:, None] * defect ** 2, axis=0))
    residuals = residuals / np.maximum(np.abs(mu), 1.0)
    count = min(residual_modes + 1, len(mu))
    return SteklovSpectrum(eigenvalues=mu, coefficients=X, boundary_traces=U,
                           degree=degree, residuals=residuals,
                           residual_estimate=float(np.max(residuals[:count])),
                           assembly=asm)


def rayleigh_quotient(domain, mode, coefficients, nodes=None, basis="arnoldi"):
    """Dirichlet energy over boundary norm of a harmonic-basis combination."""
    c = np.asarray(coefficients, dtype=float)
    if c.ndim != 1 or len(c) % 2 == 0:
        raise ValueError("coefficient vector must have odd length 2N + 1")
    degree = (len(c) - 1) // 2
    asm = assemble(domain, mode, degree, nodes=nodes, basis=basis)
    return rayleigh_quotient_assembled(asm, c)


def rayleigh_quotient_assembled(asm, c):
    denom = float(c @ asm.M @ c)
    if not denom > 1e-300:
        raise ValueError("test function vanishes on the boundary")
    return float(c @ asm.K @ c) / denom


@dataclass
class ConvergenceStudy:
    rows: list
    converged: bool
    tol: float

    def to_dict(self):
        return {"rows": self.rows, "converged": self.converged, "tol": self.tol}


def convergence_study(domain, mode, degrees, count=4, tol=1e-8, nodes=None, basis="arnoldi"):
    """First `count` nonzero eigenvalues over ascending degrees with Cauchy differences.

    ``converged`` is False when the final relative difference exceeds `tol`
    or a solve fails (ill-conditioning).
    """
    degrees = list(degrees)
    if degrees != sorted(degrees):
        raise ValueError("degrees must be ascending")
    rows, previous, converged = [], None, True
    for degree in degrees:
        try:
            spec = solve_spectrum(domain, mode, degree, nodes=nodes, basis=basis)
        except (IllConditionedError, linalg.LinAlgError) as exc:
            rows.append({"degree": degree, "mu": None, "difference": None, "error": str(exc)})
            converged = False
            continue
        mu = spec.nonzero[:count]
        row = {"degree": degree, "mu": [float(v) for v in mu], "difference": None}
        if previous is not None and len(previous) == len(mu):
            row["difference"] = float(np.max(np.abs(mu - previous) / np.abs(mu)))
        rows.append(row)
        previous = mu
    last = rows[-1]["difference"] if rows else None
    if last is None or last > tol:
        converged = False
    return ConvergenceStudy(rows=rows, converged=converged, tol=tol)


@dataclass(frozen=True)
class EuclideanBounds:
    """Classical planar bounds evaluated on one domain (Euclidean mode)."""

    mu1: float
    mu2: float
    perimeter: float
    area: float
    same_area_radius: float
    weinstock_slack: float      # 2 pi - mu1 L
    hersch_payne_slack: float   # 1/mu1 + 1/mu2 - L/pi
    brock_slack: float          # 1/mu1 + 1/mu2 - 2 R

    def to_dict(self):
        return dict(self.__dict__)


def euclidean_bounds(domain, degree=32, nodes=None):
    curve = as_curve(domain, MetricMode.EUCLIDEAN)
    spec = solve_spectrum(curve, MetricMode.EUCLIDEAN, degree, nodes=nodes)
    mu1, mu2 = float(spec.eigenvalues[1]), float(spec.eigenvalues[2])
    L = curve.euclidean_perimeter()
    A = curve.euclidean_area()
    R = float(np.sqrt(A / np.pi))
    s = 1.0 / mu1 + 1.0 / mu2
    return EuclideanBounds(mu1=mu1, mu2=mu2, perimeter=L, area=A, same_area_radius=R,
                           weinstock_slack=2.0 * np.pi - mu1 * L,
                           hersch_payne_slack=s - L / np.pi, brock_slack=s - 2.0 * R)
