"""
Partial integrals of the real-time S¹ fiber integral.

    I(R′) = ∫_{−R′}^{R′} ψ(q + σp) e^{ip²/2σ} dp

For a Fourier mode e^{ikx} the square completes to
e^{ikq} e^{−ik²σ³/2} ∫ e^{i(p + kσ²)²/2σ} dp, which is a difference of
Fresnel integrals. Other ψ are integrated with panel Gauss–Legendre
quadrature fine enough to resolve the chirp at |p| = R′.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import fresnel

from ..errors import SpecValidationError

logger = logging.getLogger(__name__)

PANEL_NODES = 16


@dataclass(frozen=True)
class PartialValue:
    """I(R′) together with the L¹ mass ∫_{−R′}^{R′} |ψ(q + σp)| dp."""

    cutoff: float
    value: complex
    l1_mass: float


def _fresnel_complex(z):
    s, c = fresnel(z)
    return complex(c, s)


def _wave_number(psi):
    if psi.kind == "fourier_mode":
        return int(psi.params["k"])
    if psi.kind == "polynomial" and set(psi.params) == {"c"}:
        return 0
    return None


def fresnel_limit(psi, q, sigma):
    """
    The R′ → ∞ limit e^{ikq} e^{−ik²σ³/2} √(2πσ) e^{iπ/4} of the partial values.

    Constants count as the k = 0 mode scaled by their value.
    """
    k = _wave_number(psi)
    if k is None:
        raise SpecValidationError(
            f"The Fresnel limit is only closed-form for Fourier modes, not {psi.describe()}"
        )
    scale = complex(psi(np.array([q]))) * np.exp(-1j * k * q)
    fresnel_total = math.sqrt(2.0 * math.pi * sigma) * np.exp(0.25j * math.pi)
    return complex(scale * np.exp(1j * k * q - 0.5j * k**2 * sigma**3) * fresnel_total)


def _closed_form(psi, q, sigma, cutoff, k):
    shift = k * sigma**2
    unit = math.sqrt(math.pi * sigma)
    chirp = _fresnel_complex((cutoff + shift) / unit) - _fresnel_complex((shift - cutoff) / unit)
    scale = complex(psi(np.array([q]))) * np.exp(-1j * k * q)
    value = scale * np.exp(1j * k * q - 0.5j * k**2 * sigma**3) * unit * chirp
    return complex(value), 2.0 * cutoff * abs(scale)


def _panels(psi, q, sigma, cutoff):
    # local frequency of the chirp is |p|/σ; keep a few panels per oscillation
    width = min(0.5, math.pi * sigma / (4.0 * (cutoff + 1.0)))
    count = max(1, int(math.ceil(2.0 * cutoff / width)))
    edges = np.linspace(-cutoff, cutoff, count + 1)
    x, w = leggauss(PANEL_NODES)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    p = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    values = psi((q + sigma * p)[:, None])
    return complex(np.sum(weights * values * np.exp(0.5j * p**2 / sigma))), float(np.sum(weights * np.abs(values)))


def real_time_divergence_demo(psi, q, sigma, cutoffs):
    """
    Partial values of the real-time fiber integral for increasing cutoffs.

    No convergence is asserted: the integrand has modulus |ψ| on the whole
    line, so the L¹ mass grows linearly in R′ while the partial values only
    settle by oscillatory cancellation.

    Args:
        psi: One-dimensional TestFunction on the circle
        q: Base point
        sigma: Real flow time σ > 0
        cutoffs: Increasing list of cutoffs R′

    Returns:
        List of PartialValue, one per cutoff
    """
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if psi.dim != 1:
        raise SpecValidationError(f"The divergence demo lives on the circle; {psi.describe()} is {psi.dim}-dimensional")
    cutoffs = [float(c) for c in cutoffs]
    if any(b <= a for a, b in zip(cutoffs, cutoffs[1:])) or cutoffs[0] <= 0:
        raise ValueError("cutoffs must be positive and increasing")
    q = float(np.atleast_1d(q)[0])
    k = _wave_number(psi)
    results = []
    for cutoff in cutoffs:
        if k is not None:
            value, l1_mass = _closed_form(psi, q, sigma, cutoff, k)
        else:
            value, l1_mass = _panels(psi, q, sigma, cutoff)
        results.append(PartialValue(cutoff=cutoff, value=value, l1_mass=l1_mass))
        logger.debug(f"Real-time partial value at R'={cutoff:g}: {value:.12g} (L1 mass {l1_mass:.6g})")
    return results


def gaussian_model_limit(sigma):
    """iπ/σ, the continuation of π/τ = ∫_{ℝ²} e^{−τ|p|²} dp to τ = −iσ."""
    return 1j * math.pi / sigma


def gaussian_wick_model(sigma, cutoffs, shape="square"):
    """
    Partial integrals of ∫_{ℝ²} e^{iσ(x² + y²)} dx dy over growing cutoffs.

    A square [−R, R]² factors into two Fresnel integrals and converges to
    iπ/σ. A disk of radius R gives (iπ/σ)(1 − e^{iσR²}), which keeps
    circling the limit at distance π/σ.

    Args:
        sigma: Real flow time σ > 0
        cutoffs: Increasing list of half-widths (square) or radii (disk)
        shape: "square" or "disk"

    Returns:
        List of PartialValue; l1_mass is the area of the cutoff region
    """
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if shape not in ("square", "disk"):
        raise SpecValidationError(f"Unknown cutoff shape: {shape}")
    limit = gaussian_model_limit(sigma)
    unit = math.sqrt(2.0 * sigma / math.pi)
    results = []
    for cutoff in (float(c) for c in cutoffs):
        if shape == "square":
            # ∫_{−R}^{R} e^{iσx²} dx = √(2π/σ) (C + iS)(R √(2σ/π))
            line = math.sqrt(2.0 * math.pi / sigma) * _fresnel_complex(cutoff * unit)
            value, area = line * line, 4.0 * cutoff**2
        else:
            value, area = complex(limit * (1.0 - np.exp(1j * sigma * cutoff**2))), math.pi * cutoff**2
        results.append(PartialValue(cutoff=cutoff, value=value, l1_mass=area))
        logger.debug(f"Gaussian model, {shape} cutoff {cutoff:g}: {value:.12g}")
    return results
