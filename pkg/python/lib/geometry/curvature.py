"""
Christoffel symbols and curvature by central finite differences.

Index conventions: ``christoffel[i, j, k] = Γ^i_jk``,
``riemann[i, j, k, l] = R^i_jkl`` with
R^i_jkl = ∂_k Γ^i_lj − ∂_l Γ^i_kj + Γ^i_km Γ^m_lj − Γ^i_lm Γ^m_kj,
``ricci[j, l] = R^i_jil`` and ``scalar = g^jl R_jl``.
"""

import logging
from dataclasses import dataclass

import numpy as np

from ..errors import SingularMetricError
from .finite_differences import gradient, hessian
from .normal_frame import normal_frame

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CurvaturePack:
    """Christoffel symbols, Riemann, Ricci and scalar curvature at a chart point."""

    point: np.ndarray
    christoffel: np.ndarray
    riemann: np.ndarray
    ricci: np.ndarray
    scalar: float
    frame: np.ndarray
    ricci_frame: np.ndarray

    @property
    def dim(self):
        return self.ricci.shape[0]

    @classmethod
    def flat(cls, dim):
        """Curvature data of a flat metric in orthonormal coordinates."""
        zeros2 = np.zeros((dim, dim))
        return cls(
            point=np.zeros(dim),
            christoffel=np.zeros((dim, dim, dim)),
            riemann=np.zeros((dim, dim, dim, dim)),
            ricci=zeros2,
            scalar=0.0,
            frame=np.eye(dim),
            ricci_frame=zeros2.copy(),
        )

    def ricci_norm(self):
        """Operator norm of the Ricci tensor in the orthonormal frame."""
        return float(np.max(np.abs(np.linalg.eigvalsh(self.ricci_frame))))


def metric_derivatives(metric, x):
    """
    First derivatives of g.

    Returns:
        Array dg with dg[a, b, c] = ∂_a g_bc
    """
    return gradient(metric.g, x, metric.fd_step, metric.fd_order)


def _christoffel_field(metric, xs):
    """Christoffel symbols at a batch of points (..., n) without validation."""
    xs = np.asarray(xs, dtype=float)
    dg = gradient(metric.g, xs, metric.fd_step, metric.fd_order)
    ginv = np.linalg.inv(metric.g(xs))
    # T[l, j, k] = ∂_j g_lk + ∂_k g_jl − ∂_l g_jk
    t = np.swapaxes(dg, -3, -2) + np.swapaxes(dg, -3, -1) - dg
    gamma = 0.5 * np.einsum("...il,...ljk->...ijk", ginv, t)
    return 0.5 * (gamma + np.swapaxes(gamma, -1, -2))


def christoffel(metric, x):
    """
    Christoffel symbols of the second kind at a chart point.

    Args:
        metric: ChartMetric
        x: Chart point strictly inside the domain by one stencil width

    Returns:
        Array Γ of shape (n, n, n), Γ[i, j, k] = Γ^i_jk, symmetric in (j, k)

    Raises:
        DomainError: If the stencil leaves the domain
        SingularMetricError: If g(x) is singular or badly conditioned
    """
    x = metric.require_interior(x, levels=1)
    metric.metric_at(x)
    return _christoffel_field(metric, x)


def curvature(metric, x):
    """
    Riemann, Ricci and scalar curvature at a chart point.

    The derivatives of Γ are taken by differencing the Christoffel field, so
    the point needs room for two nested stencils.

    Args:
        metric: ChartMetric
        x: Chart point

    Returns:
        CurvaturePack
    """
    x = metric.require_interior(x, levels=2)
    g = metric.metric_at(x)
    ginv = np.linalg.inv(g)
    gamma = _christoffel_field(metric, x)
    # d_gamma[a, i, j, k] = ∂_a Γ^i_jk
    d_gamma = gradient(lambda xs: _christoffel_field(metric, xs), x, metric.fd_step, metric.fd_order)

    riemann = (
        np.einsum("kilj->ijkl", d_gamma)
        - np.einsum("likj->ijkl", d_gamma)
        + np.einsum("ikm,mlj->ijkl", gamma, gamma)
        - np.einsum("ilm,mkj->ijkl", gamma, gamma)
    )
    ricci = np.einsum("ijil->jl", riemann)
    ricci = 0.5 * (ricci + ricci.T)
    scalar = float(np.einsum("jk,jk->", ginv, ricci))

    frame = normal_frame(metric, x).frame
    ricci_frame = frame.T @ ricci @ frame
    ricci_frame = 0.5 * (ricci_frame + ricci_frame.T)
    logger.debug(f"Curvature at {x.tolist()}: S = {scalar:.12g}")
    return CurvaturePack(
        point=x,
        christoffel=gamma,
        riemann=riemann,
        ricci=ricci,
        scalar=scalar,
        frame=frame,
        ricci_frame=ricci_frame,
    )


def inverse_metric_jets(metric, x, second=True):
    """
    The inverse metric and its first (optionally second) derivatives.

    These are the jets of the Hamiltonian E = ½ g^{kl}(x) p_k p_l needed by the
    geodesic integrator and its linearisation.

    Args:
        metric: ChartMetric
        x: Chart point (only the domain is checked; the flow validates separately)
        second: Whether to compute second derivatives

    Returns:
        Tuple (ginv, d_ginv, dd_ginv) with d_ginv[a, k, l] = ∂_a g^{kl} and
        dd_ginv[a, b, k, l] = ∂_a ∂_b g^{kl} (None when second is False)
    """
    x = np.asarray(x, dtype=float)

    def ginv_field(xs):
        return np.linalg.inv(metric.g(xs))

    try:
        ginv = ginv_field(x)
    except np.linalg.LinAlgError as e:
        raise SingularMetricError(f"Metric at {x.tolist()} is not invertible", e) from e
    d_ginv = gradient(ginv_field, x, metric.fd_step, metric.fd_order)
    dd_ginv = hessian(ginv_field, x, metric.fd_step, metric.fd_order) if second else None
    return ginv, d_ginv, dd_ginv
