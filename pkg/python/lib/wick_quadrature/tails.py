"""
Fiber mass of a Gaussian-weighted function outside a ball.

The measured tail ∫_{r0<|p|<r} |f(p)| e^{−|p|²/2tħ} dⁿp is computed in the
scaled form e^{−r0²/2tħ} ∫ |f| e^{−(|p|² − r0²)/2tħ}, with the radial
variable u = (|p|² − r0²)/2tħ so the weight is e^{−u}.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad

logger = logging.getLogger(__name__)

ANGULAR_NODES = 64


@dataclass(frozen=True)
class TailEstimate:
    """Measured tail mass and the analytic bound C(q) e^{−r0²/2tħ}."""

    tail: float
    bound: float
    r0: float
    r: float
    t: float


def sphere_rule(n, nodes=ANGULAR_NODES):
    """
    Directions and weights integrating over the unit sphere S^{n−1}.

    Args:
        n: Fiber dimension (1, 2 or 3)
        nodes: Angular resolution

    Returns:
        (directions (m, n), weights (m,))
    """
    if n == 1:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    phi = 2.0 * math.pi * np.arange(nodes) / nodes
    if n == 2:
        return np.stack([np.cos(phi), np.sin(phi)], axis=-1), np.full(nodes, 2.0 * math.pi / nodes)
    if n == 3:
        c, w = leggauss(nodes // 2)
        s = np.sqrt(1.0 - c**2)
        cos_t, ph = np.meshgrid(c, phi, indexing="ij")
        sin_t = np.meshgrid(s, phi, indexing="ij")[0]
        directions = np.stack([sin_t * np.cos(ph), sin_t * np.sin(ph), cos_t], axis=-1).reshape(-1, 3)
        weights = np.outer(w, np.full(nodes, 2.0 * math.pi / nodes)).ravel()
        return directions, weights
    raise ValueError(f"Tail quadrature supports fiber dimensions 1 to 3, got {n}")


def _annulus(f, n, r0, r, variance):
    """∫_{r0<|p|<r} |f| e^{−(|p|² − r0²)/2 variance} dⁿp; variance=inf drops the weight."""
    directions, weights = sphere_rule(n)

    def shell(rho):
        return float(np.sum(weights * np.abs(f(rho * directions))))

    if math.isinf(variance):
        value, _ = quad(lambda rho: shell(rho) * rho ** (n - 1), r0, r, limit=200)
        return value

    upper = (r**2 - r0**2) / (2.0 * variance)

    def radial(u):
        rho = math.sqrt(r0**2 + 2.0 * variance * u)
        # ρ^{n−1} dρ = variance ρ^{n−2} du
        return shell(rho) * math.exp(-u) * variance * rho ** (n - 2)

    breaks = [b for b in (1.0, 10.0, 40.0) if b < upper]
    value, _ = quad(radial, 0.0, upper, points=breaks or None, limit=200)
    return value


def tail_mass(metric, q, r0, r, t, hbar=1.0, f=None):
    """
    Gaussian-weighted fiber mass over the annulus r0 < |p| < r at q.

    The bound follows the Hölder split: for tħ <= 1,
    e^{−|p|²/2tħ} <= e^{−|p|²/2} e^{−r0²(1/tħ − 1)/2} on the annulus, so
    C(q) = e^{r0²/2} ∫ |f| e^{−|p|²/2}; for tħ > 1, C(q) = ∫ |f|.

    Args:
        metric: ChartMetric (fiber vectors are taken in the orthonormal frame at q)
        q: Base point
        r0: Inner radius
        r: Outer radius, r0 < r
        t: Wick time
        hbar: ħ
        f: Bounded function of fiber vectors (..., n); default f ≡ 1

    Returns:
        TailEstimate
    """
    if not 0 < r0 < r:
        raise ValueError(f"Need 0 < r0 < r, got r0={r0}, r={r}")
    n = metric.dim
    f = f if f is not None else (lambda p: np.ones(np.shape(p)[:-1]))
    variance = t * hbar
    decay = math.exp(-(r0**2) / (2.0 * variance))
    tail = decay * _annulus(f, n, r0, r, variance)
    constant = _annulus(f, n, r0, r, 1.0) if variance <= 1.0 else _annulus(f, n, r0, r, math.inf)
    bound = constant * decay
    logger.debug(f"Tail mass at {np.asarray(q).tolist()}: {tail:.6g} <= {bound:.6g} (r0={r0:g}, t={t:g})")
    return TailEstimate(tail=tail, bound=bound, r0=r0, r=r, t=t)


def decay_rate(estimates):
    """
    Fitted rate λ of tail ∝ e^{−λ/t} from a least-squares line of log(tail) against 1/t.

    Args:
        estimates: TailEstimate values at several t

    Returns:
        λ, to be compared with r0²/2ħ
    """
    inverse_t = np.array([1.0 / e.t for e in estimates])
    log_tail = np.log([e.tail for e in estimates])
    slope, _ = np.polyfit(inverse_t, log_tail, 1)
    return -float(slope)
