"""
BKS half-form pairing densities.

Two pairings between the vertical half-form √dvol_g and its image under the
geodesic flow are computed here:

- the Wick-rotated pairing in normal coordinates, truncated at second order
  in |p|: (2πħ)^{n/2} (1 + R_jk p^j p^k / 12);
- the real-time pairing at flow time σ, from the Jacobi block of the flow
  jacobian. It degenerates at conjugate points.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from .. import settings
from ..errors import DegeneratePairingError, ValidityRadiusError
from ..geodesic_flow.flow import default_steps, trajectory
from ..geometry.normal_coordinates import normal_coords_det_g

logger = logging.getLogger(__name__)

TRUNCATION_ORDER = 2
VALIDITY_BOUND = 3.0


@dataclass(frozen=True)
class PairingDensity:
    """Value of the pairing (a multiple of (2πħ)^{n/2}), truncation order and remainder bound."""

    value: np.ndarray
    order: int
    remainder_bound: np.ndarray


def liouville_density(metric, x, hbar=1.0):
    """
    Base density of the Liouville form in chart coordinates, (2πħ)^{−n} det(g(x))^{−1/2}.

    Args:
        metric: ChartMetric
        x: Chart point
        hbar: Planck constant ħ > 0

    Returns:
        Float density
    """
    g = metric.metric_at(x)
    return float((2.0 * math.pi * hbar) ** (-metric.dim) / math.sqrt(np.linalg.det(g)))


def ricci_quadratic(curv, p):
    """R_jk p^j p^k with p in the orthonormal frame (indices raised with the identity)."""
    p = np.asarray(p, dtype=float)
    return np.einsum("jk,...j,...k->...", curv.ricci_frame, p, p)


def _check_validity(quadratic):
    if np.any(np.abs(quadratic) >= VALIDITY_BOUND):
        worst = float(np.max(np.abs(quadratic)))
        raise ValidityRadiusError(
            f"|R_jk p^j p^k| = {worst:.6g} >= 3: the volume expansion is outside its range of validity"
        )


def pulled_back_volume_taylor(curv, p):
    """
    Second-order Taylor value of √det g(exp_q(p)) in normal coordinates.

    Args:
        curv: CurvaturePack at q
        p: Fiber vector(s) in the orthonormal frame, shape (..., n)

    Returns:
        1 − R_jk p^j p^k / 6

    Raises:
        ValidityRadiusError: If |R_jk p^j p^k| >= 3 anywhere
    """
    quadratic = ricci_quadratic(curv, p)
    _check_validity(quadratic)
    return 1.0 - quadratic / 6.0


def bks_density_wick(curv, p, hbar=1.0, remainder_constant=0.0):
    """
    Wick-rotated BKS pairing (√dvol_g, √Φ_i^* dvol_g) to second order in |p|.

    Args:
        curv: CurvaturePack at q
        p: Fiber vector(s) in the orthonormal frame, shape (..., n)
        hbar: ħ
        remainder_constant: Constant C of the |p|³ remainder (see volume_remainder_constant)

    Returns:
        PairingDensity with value (2πħ)^{n/2} (1 + R_jk p^j p^k / 12)
    """
    quadratic = ricci_quadratic(curv, p)
    _check_validity(quadratic)
    norm = np.linalg.norm(np.asarray(p, dtype=float), axis=-1)
    prefactor = (2.0 * math.pi * hbar) ** (curv.dim / 2.0)
    return PairingDensity(
        value=prefactor * (1.0 + quadratic / 12.0),
        order=TRUNCATION_ORDER,
        remainder_bound=prefactor * remainder_constant * norm**3,
    )


def volume_remainder_constant(metric, q, radius=None, step=None, steps=200):
    """
    Heuristic constant C for the |p|³ remainder of the volume expansion.

    C is 1/6 of the largest third radial derivative of √det g in normal
    coordinates, sampled at s = 0 and s = radius/2 along the frame axes and
    their pairwise diagonals.

    Args:
        metric: ChartMetric
        q: Base point
        radius: Radial extent of the sample (default: 4 steps)
        step: Difference step in s
        steps: Fixed flow steps for each geodesic shot

    Returns:
        Nonnegative float (0 for flat metrics)
    """
    if metric.is_flat:
        return 0.0
    step = step if step is not None else settings.get("quadrature", "remainder_step")
    radius = radius if radius is not None else 4.0 * step
    n = metric.dim
    directions = [np.eye(n)[i] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            directions.append((np.eye(n)[i] + np.eye(n)[j]) / math.sqrt(2.0))

    def root_det(s, u):
        # negative s runs along −u
        if s == 0:
            return 1.0
        return math.sqrt(normal_coords_det_g(metric, q, s * u, steps=steps))

    largest = 0.0
    for u in directions:
        for s in (0.0, 0.5 * radius):
            values = [root_det(s + k * step, u) for k in (2, 1, -1, -2)]
            third = (values[0] - 2.0 * values[1] + 2.0 * values[2] - values[3]) / (2.0 * step**3)
            largest = max(largest, abs(third))
    logger.debug(f"Volume remainder constant at {np.asarray(q).tolist()}: {largest / 6.0:.6g}")
    return largest / 6.0


def mean_remainder_bound(constant, variance, dim):
    """
    Gaussian average of the |p|³ remainder, relative to the leading pairing.

    Args:
        constant: C from volume_remainder_constant
        variance: tħ, the fiber variance of the Wick weight
        dim: Fiber dimension n

    Returns:
        C E|p|³ for p ~ N(0, tħ I_n), that is C (2tħ)^{3/2} Γ((n+3)/2) / Γ(n/2)
    """
    return constant * (2.0 * variance) ** 1.5 * math.gamma((dim + 3) / 2.0) / math.gamma(dim / 2.0)


def bks_density_real(metric, z, sigma, hbar=1.0, steps=None, samples=64, degenerate_tol=None, localization=None):
    """
    Real-time BKS pairing (√dvol_g, √Φ_σ^* dvol_g) at z.

    The squared pairing is (2πħ)^n √(det g(x_σ)/det g(x)) det(∂x_σ/∂p) / i^n.
    Its square root is e^{−iπn/4} times the principal root of the real factor
    near σ = 0⁺, continued along the sampled trajectory by picking the sign
    closest to the previous sample.

    The pairing is degenerate when |det ∂x_σ/∂p| is below degenerate_tol, or
    when a secant step on the last two samples puts a nonzero root of the
    determinant within localization of σ.

    Args:
        metric: ChartMetric
        z: Initial PhasePoint
        sigma: Flow time σ > 0
        hbar: ħ
        steps: Total fixed steps of the flow
        samples: Number of continuation samples
        degenerate_tol: Threshold on |det ∂x_σ/∂p|
        localization: Distance in σ to a conjugate time treated as reaching it

    Returns:
        Complex pairing value

    Raises:
        DegeneratePairingError: At conjugate points (the pushed vertical polarization is not transverse)
    """
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    degenerate_tol = degenerate_tol if degenerate_tol is not None else settings.get("flow", "degenerate_tol")
    localization = localization if localization is not None else settings.get("flow", "conjugate_localization")
    n = metric.dim
    steps = steps if steps is not None else default_steps(sigma)
    states = trajectory(metric, z, sigma, samples, steps)
    det_g0 = np.linalg.det(metric.metric_at(z.x))
    phase = np.exp(-0.25j * math.pi * n)

    root = None
    block_dets = [0.0]
    for state in states[1:]:
        block_det = float(np.linalg.det(state.jacobi_block()))
        block_dets.append(block_det)
        det_g = np.linalg.det(metric.metric_at(state.point.x))
        candidate = phase * np.sqrt(complex(math.sqrt(det_g / det_g0) * block_det))
        if root is not None and abs(candidate - root) > abs(candidate + root):
            candidate = -candidate
        root = candidate

    block_det = block_dets[-1]
    slope = (block_det - block_dets[-2]) / (states[-1].sigma - states[-2].sigma)
    distance = abs(block_det / slope) if slope != 0 else math.inf
    # the secant root near σ = 0 is the trivial zero of the block, not a conjugate point
    near_conjugate = distance <= localization and sigma - block_det / slope > localization
    if abs(block_det) < degenerate_tol or near_conjugate:
        raise DegeneratePairingError(
            f"Pairing is degenerate at sigma={sigma:.12g}: det(dx/dp) = {block_det:.3g}; "
            "the pushed vertical polarization is not transverse (conjugate point)"
        )
    return (2.0 * math.pi * hbar) ** (n / 2.0) * root
