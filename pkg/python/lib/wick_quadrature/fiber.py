"""
The Wick-rotated fiber integral j_t^r(q).

    j_t^r(q) = (2πħ)^{−n} t^{−n/2} ∫_{|p|<r} F(p) P(p) e^{−|p|²/2tħ} dⁿp

with p in the orthonormal frame at q. In ``taylor`` mode F is the
second-order expansion of ψ∘π∘Φ_i and P the Wick-rotated pairing
(2πħ)^{n/2}(1 + R_jk p^j p^k/12). In ``exact`` mode (flat models only)
F(p) = ψ_ℂ(q + ip) and P = (2πħ)^{n/2}. Either way the prefactors combine
to the normalized Gaussian (2πtħ)^{−n/2} e^{−|p|²/2tħ}.
"""

import logging
import math

import numpy as np
from numpy.polynomial.hermite import hermgauss
from scipy.special import erf

from .. import settings
from ..errors import QuadratureConvergenceError, SpecValidationError, ValidityRadiusError
from ..geometry.curvature import CurvaturePack, curvature
from ..half_forms.pairing import bks_density_wick
from .functions import normal_jets

logger = logging.getLogger(__name__)


def r_prime(metric, q, r=math.inf, curv=None):
    """
    Radius on which the volume expansion is valid: min(r, √(3/‖R_jk(q)‖)).

    Args:
        metric: ChartMetric
        q: Base point
        r: Requested fiber radius
        curv: CurvaturePack at q, if already computed

    Returns:
        Float radius (r itself when the Ricci tensor vanishes)
    """
    if metric.is_flat:
        return r
    curv = curv if curv is not None else curvature(metric, q)
    norm = curv.ricci_norm()
    if norm == 0.0:
        return r
    return min(r, math.sqrt(3.0 / norm))


def sampled_r_prime(metric, points, r=math.inf):
    """The smallest r_prime over sample points, standing in for the minimum over M."""
    radius = min(r_prime(metric, q, r) for q in points)
    logger.debug(f"Validity radius over {len(points)} sample points of {metric.kind}: {radius:.6g}")
    return radius


def psi_flow_taylor(metric, psi, q, p, jets=None):
    """
    ψ∘π∘Φ_i(q, p) to second order: ψ(q) + i p^k ∂_kψ − ½ p^j p^k ∂_j∂_kψ.

    Args:
        metric: ChartMetric
        psi: TestFunction
        q: Base point
        p: Fiber vector(s) in the orthonormal frame, shape (..., n)
        jets: NormalJets of ψ at q, if already computed

    Returns:
        Complex value(s)
    """
    jets = jets if jets is not None else normal_jets(psi, metric, q)
    p = np.asarray(p, dtype=float)
    return jets.value + 1j * (p @ jets.grad) - 0.5 * np.einsum("...j,jk,...k->...", p, jets.hess, p)


def axis_rule(cfg, nodes):
    """
    One-dimensional nodes and weights for the normalized Gaussian of variance tħ.

    Returns:
        (nodes, weights) with Σ w f(p) ≈ (2πtħ)^{−1/2} ∫ e^{−p²/2tħ} f(p) dp
    """
    variance = cfg.t * cfg.hbar
    if cfg.scheme == "gauss_hermite_truncated":
        x, w = hermgauss(nodes)
        return math.sqrt(2.0 * variance) * x, w / math.sqrt(math.pi)
    p = np.linspace(-cfg.r, cfg.r, nodes)
    w = np.full(nodes, p[1] - p[0])
    w[0] = w[-1] = 0.5 * (p[1] - p[0])
    return p, w * np.exp(-(p**2) / (2.0 * variance)) / math.sqrt(2.0 * math.pi * variance)


def ball_nodes(cfg, n, nodes):
    """Tensor-product nodes restricted to the open ball |p| < r."""
    p, w = axis_rule(cfg, nodes)
    grids = np.meshgrid(*([p] * n), indexing="ij")
    weights = np.meshgrid(*([w] * n), indexing="ij")
    points = np.stack([grid.ravel() for grid in grids], axis=-1)
    weight = np.prod(np.stack([grid.ravel() for grid in weights], axis=-1), axis=-1)
    inside = np.linalg.norm(points, axis=-1) < cfg.r
    return points[inside], weight[inside]


def _integrand(metric, psi, q, cfg, curv, jets):
    if cfg.mode == "exact":

        def exact(points):
            return psi.continued(q, points)

        return exact

    def taylor(points):
        pairing = bks_density_wick(curv, points, cfg.hbar).value / (2.0 * math.pi * cfg.hbar) ** (metric.dim / 2.0)
        return psi_flow_taylor(metric, psi, q, points, jets) * pairing

    return taylor


def jt_quadrature(metric, psi, q, cfg, curv=None, jets=None):
    """
    j_t^r(q) by tensor quadrature over the fiber ball, checked by node doubling.

    Args:
        metric: ChartMetric
        psi: TestFunction
        q: Base point
        cfg: QuadratureConfig
        curv: CurvaturePack at q, if already computed
        jets: NormalJets of ψ at q, if already computed

    Returns:
        Complex value from the doubled node count

    Raises:
        ValidityRadiusError: If cfg.r exceeds r_prime(q) in taylor mode
        SpecValidationError: If exact mode is requested off the flat models
        QuadratureConvergenceError: If doubling the nodes changes the value beyond tolerance
    """
    q = np.asarray(q, dtype=float)
    n = metric.dim
    if cfg.mode == "exact":
        if not metric.is_flat:
            raise SpecValidationError(f"The exact integrand mode needs a flat model, not {metric.kind}")
        if not psi.holomorphic:
            raise SpecValidationError(f"The exact integrand mode needs a holomorphic test function, not {psi.kind}")
    else:
        if curv is None:
            curv = CurvaturePack.flat(n) if metric.is_flat else curvature(metric, q)
        radius = r_prime(metric, q, math.inf, curv)
        if cfg.r > radius * (1.0 + 1e-12):
            raise ValidityRadiusError(
                f"Fiber radius r={cfg.r:.6g} exceeds the validity radius r'={radius:.6g} at {q.tolist()}"
            )
        if jets is None:
            jets = normal_jets(psi, metric, q, None if metric.is_flat else curv.christoffel)

    integrand = _integrand(metric, psi, q, cfg, curv, jets)
    values = []
    for nodes in (cfg.nodes_per_axis, 2 * cfg.nodes_per_axis):
        points, weights = ball_nodes(cfg, n, nodes)
        values.append(complex(np.sum(weights * integrand(points))))
    change = abs(values[1] - values[0])
    tol = settings.get("quadrature", "convergence_tol")
    logger.debug(
        f"j_t at {q.tolist()} (t={cfg.t:g}, r={cfg.r:g}, {cfg.scheme}/{cfg.mode}): node doubling change {change:.3g}"
    )
    if change > tol * max(1.0, abs(values[1])):
        raise QuadratureConvergenceError(
            f"Quadrature did not converge at {q.tolist()}: doubling {cfg.nodes_per_axis} nodes per axis "
            f"changed j_t by {change:.3g} (tolerance {tol:g})"
        )
    return values[1]


def jt_exact_model(model, psi, q, t, hbar=1.0, r=None):
    """
    Closed-form j_t^r(q) for a Fourier mode on a flat model.

    With s = tħ, each axis contributes
    e^{ik q} e^{k²s/2} · ½[erf((r + ks)/√(2s)) − erf((ks − r)/√(2s))],
    the bracket being 1 in the infinite-r limit. For n >= 2 the finite-r
    factor is the product over the cube [−r, r]^n.

    Args:
        model: Flat ChartMetric (circle or flat_torus)
        psi: TestFunction of kind fourier_mode
        q: Base point
        t: Wick time
        hbar: ħ
        r: Fiber cutoff, None for the infinite-r limit

    Returns:
        Complex value
    """
    if not model.is_flat:
        raise SpecValidationError(f"jt_exact_model needs a flat model, not {model.kind}")
    if psi.kind != "fourier_mode":
        raise SpecValidationError(f"jt_exact_model needs a Fourier mode, not {psi.kind}")
    k = np.array([int(component) for component in psi.params["k"].split(",")], dtype=float)
    q = np.asarray(q, dtype=float)
    if k.shape != q.shape:
        raise SpecValidationError(f"Wave vector and base point dimensions differ: {k.shape} vs {q.shape}")
    s = t * hbar
    value = np.exp(1j * (k @ q)) * math.exp(0.5 * float(k @ k) * s)
    if r is not None and math.isfinite(r):
        scale = math.sqrt(2.0 * s)
        for component in k:
            value *= 0.5 * (erf((r + component * s) / scale) - erf((component * s - r) / scale))
    return complex(value)
