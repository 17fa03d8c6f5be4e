"""
Geometry module - Riemannian metrics on charts, curvature and normal coordinates.
"""

from .chart_metric import (
    BUILTIN_MANIFOLDS,
    ChartMetric,
    circle,
    custom,
    flat_torus,
    hyperbolic_halfplane,
    load_manifold,
    metric_from_spec,
    round_sphere,
    surface_of_revolution,
)
from .curvature import CurvaturePack, christoffel, curvature, inverse_metric_jets
from .normal_coordinates import normal_coords_det_g, normal_coords_metric
from .normal_frame import NormalFrame, normal_frame

__all__ = [
    "BUILTIN_MANIFOLDS",
    "ChartMetric",
    "CurvaturePack",
    "NormalFrame",
    "christoffel",
    "circle",
    "curvature",
    "custom",
    "flat_torus",
    "hyperbolic_halfplane",
    "inverse_metric_jets",
    "load_manifold",
    "metric_from_spec",
    "normal_coords_det_g",
    "normal_coords_metric",
    "normal_frame",
    "round_sphere",
    "surface_of_revolution",
]
