"""
The lift of the geodesic flow to the prequantum line bundle, in the vertical trivialization.

    ρ̂_σ(ψ)(z) = e^{iσE(z)/ħ} ψ(π(Φ_σ z))

Its generator is −(i/ħ)Ê = X_E + (i/ħ)E. On flat models the adapted complex
structure J_t has the holomorphic coordinate w = x + itp, and
s = ψ_ℂ(w) e^{−tE/ħ} is a holomorphic section: its covariant derivative
d + (i/ħ)θ along the anti-holomorphic direction t∂_x + i∂_p vanishes.
"""

import logging

import numpy as np

from ..errors import SpecValidationError
from ..geodesic_flow.flow import flow
from ..geodesic_flow.phase_space import kinetic_energy
from ..geometry.finite_differences import gradient

logger = logging.getLogger(__name__)

HOLOMORPHIC_FD_STEP = 1.0e-3
HOLOMORPHIC_FD_ORDER = 6


def prequantum_flow(metric, psi, z, sigma, hbar=1.0, steps=None):
    """
    ρ̂_σ(ψ) at z.

    Args:
        metric: ChartMetric
        psi: TestFunction
        z: PhasePoint
        sigma: Flow time
        hbar: ħ
        steps: Fixed flow steps

    Returns:
        Complex value e^{iσE(z)/ħ} ψ(π Φ_σ z)
    """
    energy = kinetic_energy(metric, z)
    if sigma == 0:
        return complex(psi(z.x))
    x = metric.wrap(flow(metric, z, sigma, steps).point.x)
    return complex(np.exp(1j * sigma * energy / hbar) * psi(x))


def prequantum_generator(metric, psi, z, hbar=1.0):
    """
    (X_E + (i/ħ)E)ψ at z, the σ-derivative of ρ̂_σ(ψ) at σ = 0.

    X_E acts on the pulled-back ψ through ẋ^j = g^{jk} p_k.
    """
    ginv = metric.inverse_at(z.x)
    energy = kinetic_energy(metric, z)
    velocity = ginv @ z.p
    return complex(velocity @ psi.grad(z.x, metric) + 1j * energy / hbar * complex(psi(z.x)))


def phase_grid(dim, points=64, x_range=(0.0, 2.0 * np.pi), p_range=(-2.0, 2.0)):
    """
    A points x points sample grid of phase points (x, p), flattened to shape (points², 2·dim).

    For dim > 1 the j-th components are offset (x) and damped (p) so the
    samples are not confined to the diagonal.
    """
    xs = np.linspace(*x_range, points, endpoint=False)
    ps = np.linspace(*p_range, points)
    xg, pg = np.meshgrid(xs, ps, indexing="ij")
    axis = np.arange(dim)
    x = xg.ravel()[:, None] + 0.7 * axis[None, :]
    p = pg.ravel()[:, None] * (1.0 - 0.3 * axis[None, :])
    return np.concatenate([x, p], axis=-1)


def holomorphic_section_check(model, psi, t, hbar=1.0, samples=None, weighted=True):
    """
    Largest residual of ∇ s along t∂_x + i∂_p over phase samples.

    The residual of axis j is t ∂_{x_j} s + i ∂_{p_j} s + (i/ħ) t p_j s with
    derivatives by central differences. With ``weighted=False`` the factor
    e^{−tE/ħ} is dropped, which leaves the residual (i/ħ) t p_j s.

    Args:
        model: Flat ChartMetric (circle or flat_torus)
        psi: Holomorphically continuable TestFunction
        t: Wick time > 0
        hbar: ħ
        samples: Phase points (m, 2n); default phase_grid(n)
        weighted: Keep the e^{−tE/ħ} factor

    Returns:
        Max absolute residual over samples and axes
    """
    if not model.is_flat:
        raise SpecValidationError(f"The holomorphic section check needs a flat model, not {model.kind}")
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    n = model.dim
    samples = np.asarray(samples if samples is not None else phase_grid(n), dtype=float)

    def section(phase):
        x, p = phase[..., :n], phase[..., n:]
        s = psi.continued(x, t * p)
        if weighted:
            s = s * np.exp(-t * np.sum(p**2, axis=-1) / (2.0 * hbar))
        return s

    s = section(samples)
    # derivatives[m, a] = ∂_a s at sample m, a running over (x; p)
    derivatives = gradient(section, samples, HOLOMORPHIC_FD_STEP, HOLOMORPHIC_FD_ORDER)
    p = samples[:, n:]
    residual = t * derivatives[:, :n] + 1j * derivatives[:, n:] + (1j / hbar) * t * p * s[:, None]
    worst = float(np.max(np.abs(residual)))
    logger.debug(f"Holomorphic section residual on {model.kind} at t={t:g} (weighted={weighted}): {worst:.3g}")
    return worst
