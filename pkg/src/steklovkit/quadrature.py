"""Gauss-Legendre and periodic trapezoid rules used throughout the package."""

from functools import lru_cache

import numpy as np


class QuadratureError(RuntimeError):
    """Raised when an adaptive rule cannot reach its tolerance."""

    def __init__(self, message, estimate):
        super().__init__(f"{message} (achieved error estimate {estimate:.3e})")
        self.estimate = estimate


@lru_cache(maxsize=None)
def gauss_legendre(order):
    """Nodes and weights of the `order`-point rule on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(order)
    x = 0.5 * (x + 1.0)
    w = 0.5 * w
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=None)
def composite_gauss_legendre(panels, order):
    """Composite rule on [0, 1] with `panels` equal panels."""
    x, w = gauss_legendre(order)
    edges = np.arange(panels, dtype=float)[:, None]
    nodes = ((edges + x[None, :]) / panels).ravel()
    weights = np.tile(w / panels, panels)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def integrate_unit_interval(func, rtol=1e-13, atol=0.0, order=20, panels=1,
                            max_panels=8192):
    """Integrate a batch of smooth functions over [0, 1].

    `func` receives the node vector ``s`` (shape ``(N,)``) and returns values
    of shape ``(..., N)``. The panel count is doubled until two successive
    composite rules agree to ``rtol`` (relative, elementwise) or ``atol``.

    Returns the integrals with the batch shape of `func`'s output.
    """
    nodes, weights = composite_gauss_legendre(panels, order)
    previous = func(nodes) @ weights
    while True:
        panels *= 2
        nodes, weights = composite_gauss_legendre(panels, order)
        current = func(nodes) @ weights
        err = np.abs(current - previous)
        bound = np.maximum(rtol * np.abs(current), atol)
        if np.all(err <= bound):
            return current
        if panels >= max_panels:
            rel = np.max(err / np.maximum(np.abs(current), np.finfo(float).tiny))
            raise QuadratureError(
                f"Gauss-Legendre did not converge with {panels} panels", rel)
        previous = current


def trapezoid_nodes(m):
    """Uniform periodic nodes on [0, 2*pi) and their common weight."""
    theta = 2.0 * np.pi * np.arange(m) / m
    return theta, 2.0 * np.pi / m
