"""Deterministic tensor-grid integration over 1-6 dimensions.

Only fixed rules (midpoint, Gauss-Legendre): acceptance runs must be
bit-stable across repetitions and worker counts, so there is no Monte
Carlo and the summation order is fixed (numpy pairwise reduction over a
fixed axis order).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import NumericalError

_EPS = 1e-300  # floor for relative convergence denominators


@dataclass(frozen=True)
class AxisSpec:
    """One integration axis: node count, window, and rule."""

    nodes: int
    lower: float
    upper: float
    rule: str = "gauss-legendre"  # or "midpoint"

    def __post_init__(self):
        if self.nodes < 1:
            raise ValueError(f"node count must be >= 1, got {self.nodes}")
        if not self.upper > self.lower:
            raise ValueError(f"empty window [{self.lower}, {self.upper}]")
        if self.rule not in ("gauss-legendre", "midpoint"):
            raise ValueError(f"unknown rule {self.rule!r}")

    def grid(self):
        """Nodes and weights on [lower, upper]."""
        if self.rule == "gauss-legendre":
            x, w = np.polynomial.legendre.leggauss(self.nodes)
            half = 0.5 * (self.upper - self.lower)
            return self.lower + (x + 1.0) * half, w * half
        step = (self.upper - self.lower) / self.nodes
        x = self.lower + (np.arange(self.nodes) + 0.5) * step
        return x, np.full(self.nodes, step)

    def halved(self) -> "AxisSpec":
        return replace(self, nodes=max(1, math.ceil(self.nodes / 2)))


@dataclass(frozen=True)
class QuadratureSpec:
    """Tensor-product spec: one AxisSpec per dimension plus a relative
    convergence threshold used to flag (not reject) doubtful results."""

    axes: tuple
    threshold: float = 1e-3

    def __post_init__(self):
        if not self.axes:
            raise ValueError("at least one axis required")
        if self.threshold <= 0:
            raise ValueError("threshold must be positive")

    @property
    def ndim(self) -> int:
        return len(self.axes)

    def halved(self) -> "QuadratureSpec":
        return replace(self, axes=tuple(ax.halved() for ax in self.axes))


def _tensor_eval(f, spec: QuadratureSpec) -> float:
    grids = [ax.grid() for ax in spec.axes]
    mesh = np.meshgrid(*[g[0] for g in grids], indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=-1)  # (N, ndim)
    vals = np.asarray(f(pts), dtype=float).reshape(pts.shape[0])
    if not np.all(np.isfinite(vals)):
        i = int(np.nonzero(~np.isfinite(vals))[0][0])
        raise NumericalError(f"non-finite integrand sample at point {pts[i].tolist()}")
    w = grids[0][1]
    for g in grids[1:]:
        w = np.multiply.outer(w, g[1])
    return float(np.sum(vals.reshape(w.shape) * w))


def integrate(f, spec: QuadratureSpec):
    """Tensor-product quadrature of a scalar field over the spec's box.

    Args:
        f: callable taking an (N, ndim) array of sample points and returning
           N real values (vectorized evaluation).
        spec: axis layout and convergence threshold.

    Returns:
        (value, convergence_estimate) where the estimate is
        |value - value_at_half_nodes| / max(|value|, tiny).
    """
    value = _tensor_eval(f, spec)
    coarse = _tensor_eval(f, spec.halved())
    estimate = abs(value - coarse) / max(abs(value), _EPS)
    return value, estimate


def gauss_legendre(nodes: int, lower: float, upper: float):
    """Gauss-Legendre nodes/weights on an interval (convenience wrapper)."""
    return AxisSpec(nodes, lower, upper, "gauss-legendre").grid()


def disc_grid(diameter: float, radial_nodes: int, angular_nodes: int):
    """Polar product rule over a centered disc.

    Radial direction: Gauss-Legendre in r^2 (exact area for any node count);
    angular direction: midpoint rule, whose uniform offset angles keep the
    node set mirror-symmetric so x -> -x symmetries hold to roundoff.

    Returns:
        (points, weights): (N, 2) offsets in meters and weights summing to
        the disc area pi d^2/4.  diameter 0 collapses to a single center
        point of weight 1 so the enclosing tensor product degenerates to a
        point evaluation.
    """
    if diameter < 0:
        raise ValueError(f"diameter must be >= 0, got {diameter}")
    if radial_nodes < 1 or angular_nodes < 1:
        raise ValueError("node counts must be >= 1")
    if diameter == 0.0:
        return np.zeros((1, 2)), np.ones(1)
    radius = diameter / 2.0
    # dA = r dr dtheta = (1/2) du dtheta with u = r^2
    u, wu = gauss_legendre(radial_nodes, 0.0, radius * radius)
    theta = 2.0 * np.pi * (np.arange(angular_nodes) + 0.5) / angular_nodes
    wtheta = np.full(angular_nodes, 2.0 * np.pi / angular_nodes)
    r = np.sqrt(u)
    x = np.outer(r, np.cos(theta)).ravel()
    y = np.outer(r, np.sin(theta)).ravel()
    weights = 0.5 * np.outer(wu, wtheta).ravel()
    return np.stack([x, y], axis=-1), weights


@dataclass(frozen=True)
class QuadratureSettings:
    """Scenario-level quadrature configuration (the config file's
    `quadrature` section) from which the detection module assembles its
    concrete tensor axes.

    omega windows: the pump axis spans +-omega_p_sigmas intensity sigmas of
    the pump spectrum; the signal axis spans the filter-implied window
    (+-3 intensity sigmas of the filter) unless omega_s_window_nm overrides
    it, and +-no_filter_window_nm around degeneracy when no filter is
    configured.
    """

    omega_p_nodes: int = 32
    omega_s_nodes: int = 32
    radial_nodes: int = 8
    angular_nodes: int = 16
    omega_p_sigmas: float = 3.0
    omega_s_window_nm: float | None = None
    no_filter_window_nm: float = 40.0
    singles_qx_nodes: int = 96
    singles_qy_nodes: int = 128
    convergence_threshold: float = 1e-3

    def __post_init__(self):
        for name in ("omega_p_nodes", "omega_s_nodes", "radial_nodes",
                     "angular_nodes", "singles_qx_nodes", "singles_qy_nodes"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.convergence_threshold <= 0:
            raise ValueError("convergence_threshold must be positive")

    def scaled(self, factor: float) -> "QuadratureSettings":
        """Scale every node count by `factor` (for --quadrature-scale)."""
        if factor <= 0:
            raise ValueError("scale factor must be positive")
        def s(n):
            return max(1, math.ceil(n * factor))
        return replace(
            self,
            omega_p_nodes=s(self.omega_p_nodes),
            omega_s_nodes=s(self.omega_s_nodes),
            radial_nodes=s(self.radial_nodes),
            angular_nodes=s(self.angular_nodes),
            singles_qx_nodes=s(self.singles_qx_nodes),
            singles_qy_nodes=s(self.singles_qy_nodes),
        )
