"""
Fixed-step symplectic integration of the geodesic flow and its tangent map.

The base scheme is the generalized leapfrog (Störmer–Verlet for a
non-separable Hamiltonian), which is symmetric and of order 2:

    p_h = p − (h/2) ∂_x E(x, p_h)                      (implicit in p_h)
    x1  = x + (h/2) [∂_p E(x, p_h) + ∂_p E(x1, p_h)]   (implicit in x1)
    p1  = p_h − (h/2) ∂_x E(x1, p_h)

Three substeps with the triple-jump weights give order 4. The jacobian is
propagated with the exact derivative of each substep, so it is the tangent
map of the discrete flow.
"""

import logging
from dataclasses import dataclass

import numpy as np

from .. import settings
from ..errors import ChartExitError, FlowConvergenceError
from ..geometry.curvature import inverse_metric_jets

logger = logging.getLogger(__name__)

CBRT2 = 2.0 ** (1.0 / 3.0)
TRIPLE_JUMP = (1.0 / (2.0 - CBRT2), -CBRT2 / (2.0 - CBRT2), 1.0 / (2.0 - CBRT2))


@dataclass
class Jets:
    """Inverse metric and its derivatives at one chart point."""

    x: np.ndarray
    ginv: np.ndarray
    d_ginv: np.ndarray
    dd_ginv: np.ndarray


def jets_at(metric, x, time):
    """Jets of g^{-1} at x, or ChartExitError if a stencil would leave the chart."""
    if not metric.contains(x, margin=metric.reach):
        raise ChartExitError(f"Geodesic left the {metric.kind} chart at sigma={time:.12g}", exit_time=time)
    ginv, d_ginv, dd_ginv = inverse_metric_jets(metric, x, second=True)
    return Jets(x=np.asarray(x, dtype=float), ginv=ginv, d_ginv=d_ginv, dd_ginv=dd_ginv)


class LeapfrogIntegrator:
    """Fourth-order composition of generalized leapfrog substeps."""

    def __init__(self, metric, tol=None, max_iter=None):
        """
        Initialize the integrator.

        Args:
            metric: ChartMetric
            tol: Fixed-point tolerance of the implicit substeps
            max_iter: Maximum fixed-point iterations per implicit substep
        """
        self.metric = metric
        self.tol = tol if tol is not None else settings.get("flow", "fixed_point_tol")
        self.max_iter = max_iter if max_iter is not None else settings.get("flow", "fixed_point_max_iter")

    def _fixed_point(self, update, start, what, time):
        value = start
        for iteration in range(self.max_iter):
            new_value = update(value)
            if np.max(np.abs(new_value - value)) <= self.tol * max(1.0, float(np.max(np.abs(new_value)))):
                return new_value
            value = new_value
        logger.debug(f"{what} fixed point stalled after {iteration + 1} iterations at sigma={time:.12g}")
        raise FlowConvergenceError(
            f"Implicit {what} substep did not converge in {self.max_iter} iterations at sigma={time:.12g}; "
            "increase the number of steps"
        )

    def substep(self, x, p, jac, h, jets, time):
        """
        One generalized leapfrog substep of size h.

        Args:
            x, p: Current position and momentum
            jac: Current 2n x 2n jacobian
            h: Step size (may be negative)
            jets: Jets at x
            time: Flow time at the start of the substep (for error messages)

        Returns:
            Tuple (x1, p1, jac1, jets1)
        """
        n = x.shape[0]
        half = 0.5 * h
        d0 = jets.d_ginv

        p_half = self._fixed_point(
            lambda ph: p - half * 0.5 * np.einsum("akl,k,l->a", d0, ph, ph),
            p,
            "momentum",
            time,
        )
        v0 = jets.ginv @ p_half

        def position_update(x1):
            ginv1 = np.linalg.inv(self.metric.g(x1))
            return x + half * (v0 + ginv1 @ p_half)

        x1 = self._fixed_point(position_update, x + h * v0, "position", time)
        jets1 = jets_at(self.metric, x1, time + h)
        p1 = p_half - half * 0.5 * np.einsum("akl,k,l->a", jets1.d_ginv, p_half, p_half)

        # Hxx[a, b] = ∂²E/∂x_a∂x_b, Hxp[a, k] = ∂²E/∂x_a∂p_k, both at (x, p_half) and (x1, p_half)
        hxx0 = 0.5 * np.einsum("abkl,k,l->ab", jets.dd_ginv, p_half, p_half)
        hxp0 = np.einsum("akl,l->ak", d0, p_half)
        hxx1 = 0.5 * np.einsum("abkl,k,l->ab", jets1.dd_ginv, p_half, p_half)
        hxp1 = np.einsum("akl,l->ak", jets1.d_ginv, p_half)

        eye = np.eye(n)
        dx, dp = jac[:n], jac[n:]
        dp_half = np.linalg.solve(eye + half * hxp0, dp - half * hxx0 @ dx)
        dx1 = np.linalg.solve(eye - half * hxp1.T, dx + half * (hxp0.T @ dx + (jets.ginv + jets1.ginv) @ dp_half))
        dp1 = dp_half - half * (hxx1 @ dx1 + hxp1 @ dp_half)
        return x1, p1, np.vstack([dx1, dp1]), jets1

    def step(self, x, p, jac, h, jets, time):
        """One fourth-order step: three substeps with the triple-jump weights."""
        elapsed = 0.0
        for weight in TRIPLE_JUMP:
            x, p, jac, jets = self.substep(x, p, jac, weight * h, jets, time + elapsed)
            elapsed += weight * h
        return x, p, jac, jets

    def integrate(self, x, p, jac, h, steps, time=0.0, callback=None):
        """
        Take ``steps`` steps of size h.

        Args:
            x, p, jac: Initial state
            h: Step size
            steps: Number of steps
            time: Flow time of the initial state
            callback: Optional callable(step_index, time, x, p, jac) after every step

        Returns:
            Tuple (x, p, jac)
        """
        jets = jets_at(self.metric, x, time)
        for index in range(steps):
            x, p, jac, jets = self.step(x, p, jac, h, jets, time + index * h)
            if callback is not None:
                callback(index + 1, time + (index + 1) * h, x, p, jac)
        return x, p, jac
