"""
Riemannian metrics on coordinate charts.

A ChartMetric is the geometry source of truth: a vectorised map from chart
points of shape (..., n) to symmetric matrices of shape (..., n, n), a box
domain, and the finite-difference settings used for every derivative taken
from it. Periodic axes (circle, torus, sphere longitude) never bound the
domain.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
import yaml

from .. import settings
from ..errors import DomainError, SingularMetricError, SpecValidationError
from .finite_differences import check_order, stencil_reach

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi

KINDS = ("flat_torus", "circle", "round_sphere", "hyperbolic_halfplane", "surface_of_revolution", "custom")

SPEC_KEYS = {"kind", "dim", "radius", "profile", "chart", "domain", "fd_order", "fd_step"}


@dataclass(frozen=True)
class ChartMetric:
    """A metric tensor on a coordinate chart of an n-manifold."""

    dim: int
    g: Callable[[np.ndarray], np.ndarray]
    domain: np.ndarray
    kind: str = "custom"
    params: dict = field(default_factory=dict)
    periods: tuple = ()
    fd_order: int = 4
    fd_step: float = 1.0e-3

    def __post_init__(self):
        if self.dim < 1:
            raise SpecValidationError(f"Metric dimension must be positive, got {self.dim}")
        if self.kind not in KINDS:
            raise SpecValidationError(f"Unknown manifold kind: {self.kind}")
        check_order(self.fd_order)
        if not self.fd_step > 0:
            raise SpecValidationError(f"fd_step must be positive, got {self.fd_step}")
        domain = np.asarray(self.domain, dtype=float)
        if domain.shape != (self.dim, 2) or np.any(domain[:, 0] >= domain[:, 1]):
            raise SpecValidationError(f"Domain must be {self.dim} increasing [low, high] pairs")
        object.__setattr__(self, "domain", domain)
        periods = tuple(self.periods) or (None,) * self.dim
        if len(periods) != self.dim:
            raise SpecValidationError("One period entry (or None) is required per axis")
        object.__setattr__(self, "periods", periods)

    @property
    def is_flat(self):
        return self.kind in ("flat_torus", "circle")

    @property
    def reach(self):
        """Distance a single finite-difference stencil extends from its center."""
        return stencil_reach(self.fd_order) * self.fd_step

    def contains(self, x, margin=0.0):
        """
        Check whether a chart point lies in the domain, at least ``margin`` from its boundary.

        Periodic axes are never checked.
        """
        x = np.asarray(x, dtype=float)
        for axis in range(self.dim):
            if self.periods[axis] is not None:
                continue
            low, high = self.domain[axis]
            if not (low + margin < x[..., axis]).all() or not (x[..., axis] < high - margin).all():
                return False
        return bool(np.all(np.isfinite(x)))

    def require_interior(self, x, levels=1):
        """
        Raise DomainError unless the point leaves room for ``levels`` nested stencils.

        Args:
            x: Chart point of shape (n,)
            levels: How many stencils are nested around x (1 for Christoffel, 2 for curvature)
        """
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise DomainError(f"Expected a point with {self.dim} coordinates, got shape {x.shape}")
        if not self.contains(x, margin=levels * self.reach):
            raise DomainError(
                f"Point {x.tolist()} is outside the {self.kind} chart domain "
                f"(stencil reach {levels * self.reach:g})"
            )
        return x

    def metric_at(self, x):
        """
        Evaluate g at a single point with validation.

        Raises:
            DomainError: If x is outside the domain
            SingularMetricError: If g(x) is not positive definite or has condition number above the limit
        """
        x = np.asarray(x, dtype=float)
        if not self.contains(x):
            raise DomainError(f"Point {x.tolist()} is outside the {self.kind} chart domain")
        g = np.asarray(self.g(x), dtype=float)
        if g.shape != (self.dim, self.dim) or not np.all(np.isfinite(g)):
            raise SingularMetricError(f"Metric at {x.tolist()} is not a finite {self.dim}x{self.dim} matrix")
        g = 0.5 * (g + g.T)
        eigenvalues = np.linalg.eigvalsh(g)
        if eigenvalues[0] <= 0.0:
            raise SingularMetricError(f"Metric at {x.tolist()} is not positive definite")
        max_condition = settings.get("geometry", "max_condition")
        if eigenvalues[-1] / eigenvalues[0] > max_condition:
            raise SingularMetricError(
                f"Metric at {x.tolist()} has condition number "
                f"{eigenvalues[-1] / eigenvalues[0]:.3g} > {max_condition:g}"
            )
        return g

    def inverse_at(self, x):
        """Inverse metric g^{jk} at a single validated point."""
        return np.linalg.inv(self.metric_at(x))

    def scaled(self, factor):
        """Return the metric factor * g (a custom metric on the same chart)."""
        if not factor > 0:
            raise SpecValidationError(f"Scale factor must be positive, got {factor}")
        g = self.g
        return replace(
            self,
            g=lambda x: factor * g(x),
            kind="custom",
            params={**self.params, "scaled_from": self.kind, "factor": factor},
        )

    def wrap(self, x):
        """Reduce periodic coordinates to [0, period)."""
        x = np.array(x, dtype=float)
        for axis, period in enumerate(self.periods):
            if period is not None:
                x[..., axis] = np.mod(x[..., axis], period)
        return x

    def describe(self):
        """Plain mapping of the metric parameters, for artifact headers."""
        return {
            "kind": self.kind,
            "dim": self.dim,
            "domain": self.domain.tolist(),
            "fd_order": self.fd_order,
            "fd_step": self.fd_step,
            **{k: v for k, v in self.params.items() if k != "g"},
        }


def pointwise(g_point, dim):
    """
    Adapt a metric written for one point at a time to the vectorised contract.

    Args:
        g_point: Callable mapping an (n,) point to an (n, n) matrix
        dim: Dimension n

    Returns:
        Callable accepting (..., n) arrays
    """

    def g(x):
        x = np.asarray(x, dtype=float)
        flat = x.reshape(-1, dim)
        values = np.stack([np.asarray(g_point(point), dtype=float) for point in flat])
        return values.reshape(x.shape[:-1] + (dim, dim))

    return g


def _fd_defaults(fd_order=None, fd_step=None):
    if fd_order is None:
        fd_order = settings.get("geometry", "fd_order")
    if fd_step is None:
        fd_step = settings.get("geometry", "fd_step")
    return int(fd_order), float(fd_step)


def flat_torus(dim=2, fd_order=None, fd_step=None):
    """Flat torus (R/2πZ)^n with the identity metric."""
    fd_order, fd_step = _fd_defaults(fd_order, fd_step)
    eye = np.eye(dim)

    def g(x):
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(eye, x.shape[:-1] + (dim, dim)).copy()

    return ChartMetric(
        dim=dim,
        g=g,
        domain=np.array([[0.0, TWO_PI]] * dim),
        kind="flat_torus",
        periods=(TWO_PI,) * dim,
        fd_order=fd_order,
        fd_step=fd_step,
    )


def circle(fd_order=None, fd_step=None):
    """The circle R/2πZ with its flat metric."""
    return replace(flat_torus(1, fd_order, fd_step), kind="circle")


def round_sphere(radius=1.0, chart="spherical", domain=None, fd_order=None, fd_step=None):
    """
    Round sphere of the given radius.

    Args:
        radius: Sphere radius ρ (scalar curvature 2/ρ²)
        chart: "spherical" for (θ, φ) with g = ρ² diag(1, sin²θ), or
            "stereographic" for u ∈ R² with g = 4ρ²/(1 + |u|²)² δ
        domain: Optional box; the θ range defaults to [0, π], the stereographic box to [-3, 3]²
    """
    fd_order, fd_step = _fd_defaults(fd_order, fd_step)
    if not radius > 0:
        raise SpecValidationError(f"Sphere radius must be positive, got {radius}")
    rho2 = float(radius) ** 2

    if chart == "spherical":

        def g(x):
            x = np.asarray(x, dtype=float)
            out = np.zeros(x.shape[:-1] + (2, 2))
            out[..., 0, 0] = rho2
            out[..., 1, 1] = rho2 * np.sin(x[..., 0]) ** 2
            return out

        default_domain = [[0.0, math.pi], [0.0, TWO_PI]]
        periods = (None, TWO_PI)
    elif chart == "stereographic":

        def g(x):
            x = np.asarray(x, dtype=float)
            factor = 4.0 * rho2 / (1.0 + np.sum(x**2, axis=-1)) ** 2
            return factor[..., None, None] * np.eye(2)

        default_domain = [[-3.0, 3.0], [-3.0, 3.0]]
        periods = (None, None)
    else:
        raise SpecValidationError(f"Unknown sphere chart: {chart} (expected spherical or stereographic)")

    return ChartMetric(
        dim=2,
        g=g,
        domain=np.array(domain if domain is not None else default_domain, dtype=float),
        kind="round_sphere",
        params={"radius": float(radius), "chart": chart},
        periods=periods,
        fd_order=fd_order,
        fd_step=fd_step,
    )


def hyperbolic_halfplane(domain=None, fd_order=None, fd_step=None):
    """Upper half-plane with g = (dx² + dy²)/y² (scalar curvature −2)."""
    fd_order, fd_step = _fd_defaults(fd_order, fd_step)

    def g(x):
        x = np.asarray(x, dtype=float)
        return (1.0 / x[..., 1] ** 2)[..., None, None] * np.eye(2)

    return ChartMetric(
        dim=2,
        g=g,
        domain=np.array(domain if domain is not None else [[-10.0, 10.0], [0.05, 20.0]], dtype=float),
        kind="hyperbolic_halfplane",
        fd_order=fd_order,
        fd_step=fd_step,
    )


def surface_of_revolution(profile, domain=None, fd_order=None, fd_step=None):
    """
    Surface of revolution ds² = du² + f(u)² dv², v periodic.

    Args:
        profile: Polynomial coefficients of f in increasing degree
        domain: Box for (u, v); the v range is informational only
    """
    fd_order, fd_step = _fd_defaults(fd_order, fd_step)
    coefficients = np.asarray(profile, dtype=float)
    if coefficients.ndim != 1 or coefficients.size == 0:
        raise SpecValidationError("profile must be a non-empty list of coefficients")

    def g(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape[:-1] + (2, 2))
        out[..., 0, 0] = 1.0
        out[..., 1, 1] = np.polynomial.polynomial.polyval(x[..., 0], coefficients) ** 2
        return out

    return ChartMetric(
        dim=2,
        g=g,
        domain=np.array(domain if domain is not None else [[-1.0, 1.0], [0.0, TWO_PI]], dtype=float),
        kind="surface_of_revolution",
        params={"profile": coefficients.tolist()},
        periods=(None, TWO_PI),
        fd_order=fd_order,
        fd_step=fd_step,
    )


def custom(g, dim, domain, periods=(), vectorized=True, fd_order=None, fd_step=None):
    """
    Wrap a user metric.

    Args:
        g: Metric callable; if ``vectorized`` is False it takes a single (n,) point
        dim: Dimension n
        domain: (n, 2) box
        periods: Per-axis period or None
    """
    fd_order, fd_step = _fd_defaults(fd_order, fd_step)
    return ChartMetric(
        dim=dim,
        g=g if vectorized else pointwise(g, dim),
        domain=np.asarray(domain, dtype=float),
        kind="custom",
        periods=tuple(periods),
        fd_order=fd_order,
        fd_step=fd_step,
    )


def metric_from_spec(spec):
    """
    Build a ChartMetric from a manifold spec mapping.

    Args:
        spec: Mapping with keys kind, dim and kind-specific parameters

    Returns:
        ChartMetric

    Raises:
        SpecValidationError: On unknown keys, unknown kinds or inconsistent parameters
    """
    if not isinstance(spec, dict):
        raise SpecValidationError("Manifold spec must be a key-value mapping")
    for key in spec:
        if key not in SPEC_KEYS:
            raise SpecValidationError(f"Unknown manifold spec key: {key}")
    if "kind" not in spec:
        raise SpecValidationError("Manifold spec is missing required key: kind")

    kind = spec["kind"]
    fd = {"fd_order": spec.get("fd_order"), "fd_step": spec.get("fd_step")}
    domain = spec.get("domain")
    if kind == "flat_torus":
        metric = flat_torus(int(spec.get("dim", 2)), **fd)
    elif kind == "circle":
        metric = circle(**fd)
    elif kind == "round_sphere":
        metric = round_sphere(float(spec.get("radius", 1.0)), spec.get("chart", "spherical"), domain, **fd)
    elif kind == "hyperbolic_halfplane":
        metric = hyperbolic_halfplane(domain, **fd)
    elif kind == "surface_of_revolution":
        if "profile" not in spec:
            raise SpecValidationError("surface_of_revolution requires key: profile")
        metric = surface_of_revolution(spec["profile"], domain, **fd)
    elif kind == "custom":
        raise SpecValidationError("custom metrics are built from Python callables, not spec files")
    else:
        raise SpecValidationError(f"Unknown manifold kind: {kind}")

    if "dim" in spec and int(spec["dim"]) != metric.dim:
        raise SpecValidationError(f"{kind} has dimension {metric.dim}, spec says {spec['dim']}")
    for key in ("radius", "chart"):
        if key in spec and kind != "round_sphere":
            raise SpecValidationError(f"Key {key} only applies to round_sphere")
    if "profile" in spec and kind != "surface_of_revolution":
        raise SpecValidationError("Key profile only applies to surface_of_revolution")
    logger.debug(f"Built {kind} metric (dim={metric.dim}, fd_order={metric.fd_order}, fd_step={metric.fd_step})")
    return metric


def load_manifold(path):
    """
    Read a manifold spec file (YAML key-value text) and build its metric.

    Args:
        path: Path to the spec file

    Returns:
        ChartMetric
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            spec = yaml.safe_load(f)
    except OSError as e:
        raise SpecValidationError(f"Cannot read manifold spec {path}: {e}", e) from e
    except yaml.YAMLError as e:
        raise SpecValidationError(f"Malformed manifold spec {path}: {e}", e) from e
    return metric_from_spec(spec)


BUILTIN_MANIFOLDS = {
    "circle": {"dim": "1", "params": {}},
    "flat_torus": {"dim": "n (default 2)", "params": {}},
    "hyperbolic_halfplane": {"dim": "2", "params": {"domain": "box, y > 0"}},
    "round_sphere": {"dim": "2", "params": {"radius": "float > 0", "chart": "spherical | stereographic"}},
    "surface_of_revolution": {"dim": "2", "params": {"profile": "coefficients of f(u), increasing degree"}},
}
