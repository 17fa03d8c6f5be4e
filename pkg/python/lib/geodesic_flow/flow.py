"""
The time-σ geodesic flow Φ_σ on T*M with its tangent map.

A FlowState records where Φ_σ sends the initial point together with the
2n x 2n jacobian in (x; p) block order. The upper-right n x n block
∂x(σ)/∂p(0) is the Jacobi-field block whose determinant detects conjugate
points.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .. import settings
from ..errors import DomainError
from .integrator import LeapfrogIntegrator
from .phase_space import PhasePoint, kinetic_energy

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FlowState:
    """Φ_σ(z0) together with its jacobian, the elapsed time and the initial energy."""

    point: PhasePoint
    jacobian: np.ndarray
    sigma: float
    energy0: float

    @property
    def dim(self):
        return self.point.dim

    def jacobi_block(self):
        """The block ∂x(σ)/∂p(0)."""
        n = self.dim
        return self.jacobian[:n, n:]

    def energy_drift(self, metric):
        return abs(kinetic_energy(metric, self.point) - self.energy0)


def default_steps(sigma, steps_per_unit=None):
    """Number of fixed steps for a flow of length |sigma|."""
    if steps_per_unit is None:
        steps_per_unit = settings.get("flow", "steps_per_unit")
    return max(1, int(math.ceil(steps_per_unit * abs(sigma))))


def initial_state(metric, z0):
    """The identity state Φ_0(z0)."""
    if not metric.contains(z0.x):
        raise DomainError(f"Initial point {z0.x.tolist()} is outside the {metric.kind} chart domain")
    return FlowState(point=z0, jacobian=np.eye(2 * z0.dim), sigma=0.0, energy0=kinetic_energy(metric, z0))


def advance(metric, state, dsigma, steps=None):
    """
    Continue a flow state by dsigma with a fixed number of steps.

    Args:
        metric: ChartMetric
        state: FlowState to continue
        dsigma: Additional flow time (may be negative)
        steps: Number of steps (default from steps_per_unit)

    Returns:
        FlowState at state.sigma + dsigma
    """
    if dsigma == 0:
        return state
    steps = steps if steps is not None else default_steps(dsigma)
    h = dsigma / steps
    x, p, jac = LeapfrogIntegrator(metric).integrate(
        state.point.x.copy(), state.point.p.copy(), state.jacobian.copy(), h, steps, time=state.sigma
    )
    return FlowState(point=PhasePoint(x, p), jacobian=jac, sigma=state.sigma + dsigma, energy0=state.energy0)


def flow(metric, z0, sigma, steps=None):
    """
    Integrate Hamilton's equations of E = ½|p|² and the variational equations.

    Args:
        metric: ChartMetric
        z0: Initial PhasePoint
        sigma: Flow time (σ = 0 returns the identity state)
        steps: Number of fixed steps (default: steps_per_unit per unit σ)

    Returns:
        FlowState

    Raises:
        ChartExitError: If the trajectory leaves the chart; carries the exit time
        FlowConvergenceError: If an implicit substep does not converge
    """
    state = advance(metric, initial_state(metric, z0), sigma, steps)
    logger.debug(f"Flowed {metric.kind} geodesic to sigma={sigma:g}; energy drift {state.energy_drift(metric):.3g}")
    return state


def trajectory(metric, z0, sigma, samples, steps=None):
    """
    Flow states at samples + 1 evenly spaced times in [0, sigma].

    Args:
        metric: ChartMetric
        z0: Initial PhasePoint
        sigma: Final flow time
        samples: Number of sample intervals
        steps: Total number of steps, rounded up to a multiple of samples

    Returns:
        List of FlowState, first entry at σ = 0
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    steps = steps if steps is not None else default_steps(sigma)
    per_sample = max(1, int(math.ceil(steps / samples)))
    dsigma = sigma / samples
    states = [initial_state(metric, z0)]
    for _ in range(samples):
        states.append(advance(metric, states[-1], dsigma, per_sample))
    return states


def transversality_det(metric, z, sigma, steps=None):
    """
    Determinant of ∂x(σ)/∂p(0), zero exactly when the pushed vertical polarization meets the vertical one.

    Args:
        metric: ChartMetric
        z: Initial PhasePoint
        sigma: Flow time
        steps: Number of fixed steps

    Returns:
        Float determinant (σ^n det g^{-1} to leading order as σ → 0)
    """
    return float(np.linalg.det(flow(metric, z, sigma, steps).jacobi_block()))


def find_conjugate_time(metric, z, sigma_max, samples=None, steps=None, xtol=None):
    """
    First flow time in (0, sigma_max] where transversality_det changes sign.

    The sign change is bracketed on a sampled trajectory and then located with
    Brent's method, continuing the flow from the left end of the bracket.

    Args:
        metric: ChartMetric
        z: Initial PhasePoint (a unit covector gives arc-length time)
        sigma_max: End of the search interval
        samples: Number of scan intervals
        steps: Total number of steps along the scan
        xtol: Absolute tolerance in σ

    Returns:
        The conjugate time, or None if the determinant keeps its sign
    """
    samples = samples if samples is not None else settings.get("flow", "conjugate_scan")
    xtol = xtol if xtol is not None else settings.get("flow", "conjugate_xtol")
    states = trajectory(metric, z, sigma_max, samples, steps)
    steps = steps if steps is not None else default_steps(sigma_max)
    per_sample = max(1, int(math.ceil(steps / samples)))

    dets = [float(np.linalg.det(state.jacobi_block())) for state in states]
    for left, right, d_left, d_right in zip(states[1:], states[2:], dets[1:], dets[2:], strict=False):
        if d_left == 0.0:
            return left.sigma
        if d_left * d_right > 0:
            continue
        width = right.sigma - left.sigma

        def det_after(ds, start=left):
            if ds == 0:
                return float(np.linalg.det(start.jacobi_block()))
            return float(np.linalg.det(advance(metric, start, ds, per_sample).jacobi_block()))

        offset = brentq(det_after, 0.0, width, xtol=xtol)
        logger.info(f"Conjugate point along {metric.kind} geodesic at sigma={left.sigma + offset:.12g}")
        return left.sigma + offset
    return None


def exponential_map(metric, q, v, steps=None):
    """
    exp_q(v) for a tangent vector v given in chart components.

    Args:
        metric: ChartMetric
        q: Base point
        v: Tangent vector at q

    Returns:
        FlowState of the time-1 flow from (q, g(q) v)
    """
    q = np.asarray(q, dtype=float)
    p0 = metric.metric_at(q) @ np.asarray(v, dtype=float)
    return flow(metric, PhasePoint(q, p0), 1.0, steps)
