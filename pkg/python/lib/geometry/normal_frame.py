"""
Orthonormal frames at a base point.

The frame's columns are g(q)-orthonormal and are produced by Gram–Schmidt on
the chart basis taken in ascending index order, so the result is
deterministic. A vector y in normal coordinates at q corresponds to the
tangent vector ``frame @ y`` in chart components.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import SingularMetricError

ORTHONORMALITY_TOL = 1e-12


@dataclass(frozen=True)
class NormalFrame:
    """Base point q and a matrix whose columns are g(q)-orthonormal."""

    base: np.ndarray
    frame: np.ndarray

    def to_chart(self, y):
        """Chart components of normal-coordinate vectors y (..., n)."""
        return np.einsum("jk,...k->...j", self.frame, np.asarray(y, dtype=float))

    def covector_to_chart(self, p):
        """
        Chart components of a covector given in the frame.

        The dual coframe is frame^{-1}; a covector with frame components p has
        chart components frame^{-T} p.
        """
        coframe = np.linalg.inv(self.frame)
        return np.einsum("aj,...a->...j", coframe, np.asarray(p, dtype=float))


def gram_schmidt(g):
    """
    Gram–Schmidt of the standard basis against an inner product matrix.

    Args:
        g: Symmetric positive definite (n, n) matrix

    Returns:
        (n, n) matrix e with e.T @ g @ e = I
    """
    n = g.shape[0]
    frame = np.zeros((n, n))
    for i in range(n):
        v = np.zeros(n)
        v[i] = 1.0
        for j in range(i):
            v = v - (frame[:, j] @ g @ v) * frame[:, j]
        norm2 = v @ g @ v
        if not norm2 > 0:
            raise SingularMetricError("Gram-Schmidt hit a null direction; metric is degenerate")
        frame[:, i] = v / np.sqrt(norm2)
    return frame


def normal_frame(metric, q):
    """
    Orthonormal frame at an interior point.

    Args:
        metric: ChartMetric
        q: Chart point

    Returns:
        NormalFrame

    Raises:
        SingularMetricError: If g(q) is singular or the frame fails the orthonormality check
    """
    q = np.asarray(q, dtype=float)
    g = metric.metric_at(q)
    frame = gram_schmidt(g)
    residual = np.max(np.abs(frame.T @ g @ frame - np.eye(metric.dim)))
    if residual > ORTHONORMALITY_TOL * max(1.0, float(np.max(np.abs(g)))):
        raise SingularMetricError(f"Frame at {q.tolist()} is not orthonormal (residual {residual:.3g})")
    return NormalFrame(base=q, frame=frame)
