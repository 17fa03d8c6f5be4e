"""
Riemannian normal coordinates at a base point.

A normal-coordinate vector y at q maps to the chart point exp_q(frame @ y).
The metric in normal coordinates is J^T g(exp_q(frame y)) J with
J = ∂x/∂y, obtained from the Jacobi-field block of the time-1 flow.
"""

import numpy as np

from .normal_frame import normal_frame


def normal_coords_metric(metric, q, y, steps=None):
    """
    The metric matrix in normal coordinates centered at q, evaluated at y.

    Args:
        metric: ChartMetric
        q: Base point
        y: Normal-coordinate offset (frame components)
        steps: Fixed steps for the time-1 geodesic shooting

    Returns:
        n x n array, the identity at y = 0

    Raises:
        ChartExitError: If the geodesic leaves the chart
    """
    # deferred: geodesic_flow imports this package
    from ..geodesic_flow.flow import exponential_map

    q = np.asarray(q, dtype=float)
    y = np.asarray(y, dtype=float)
    frame = normal_frame(metric, q)
    if not np.any(y):
        return np.eye(metric.dim)
    g_q = metric.metric_at(q)
    state = exponential_map(metric, q, frame.to_chart(y), steps)
    # ∂x/∂y = (∂x/∂p) (∂p/∂v) (∂v/∂y) = B g(q) e
    jac = state.jacobi_block() @ g_q @ frame.frame
    return jac.T @ metric.metric_at(state.point.x) @ jac


def normal_coords_det_g(metric, q, y, steps=None):
    """
    det(g) in normal coordinates centered at q, evaluated at y.

    Near y = 0 this is 1 − (1/3) R_jk y^j y^k + O(|y|³).
    """
    return float(np.linalg.det(normal_coords_metric(metric, q, y, steps)))
