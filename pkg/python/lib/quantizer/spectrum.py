"""
Flat-model spectra and inner products on M.
"""

import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .. import settings
from ..errors import SpecValidationError
from ..wick_quadrature.functions import TestFunction, fourier_mode
from .kinetic import numeric_QE

logger = logging.getLogger(__name__)

VERIFY_TOL = 1.0e-6


@dataclass(frozen=True)
class SpectrumEntry:
    """Eigenvalue ħ²|k|²/2 of a Fourier mode and its numeric_QE check."""

    k: tuple
    eigenvalue: float
    numeric: complex
    rel_error: float


def flat_spectrum(model, hbar=1.0, k_max=3, t_grid=None, base_point=None):
    """
    Eigenvalues of Q(E) = −(ħ²/2)Δ on a flat model, each checked by numeric_QE.

    Modes are the integer vectors with |k| <= k_max, sorted by eigenvalue and
    then lexicographically. The check runs numeric_QE on e^{ik·x} in exact
    mode and divides by the mode's value at the base point.

    Args:
        model: Flat ChartMetric
        hbar: ħ
        k_max: Largest |k|
        t_grid: Wick times for numeric_QE
        base_point: Point of the check (default 0.5 on every axis)

    Returns:
        List of SpectrumEntry
    """
    if not model.is_flat:
        raise SpecValidationError(f"Flat spectra need a flat model, not {model.kind}")
    if k_max < 0:
        raise SpecValidationError(f"k_max must be nonnegative, got {k_max}")
    n = model.dim
    q = np.full(n, 0.5) if base_point is None else np.asarray(base_point, dtype=float)
    bound = int(math.floor(k_max))
    modes = [k for k in itertools.product(range(-bound, bound + 1), repeat=n) if sum(c * c for c in k) <= k_max**2]
    modes.sort(key=lambda k: (sum(c * c for c in k), k))

    entries = []
    for k in modes:
        eigenvalue = 0.5 * hbar**2 * sum(c * c for c in k)
        psi = fourier_mode(k)
        numeric = numeric_QE(model, psi, q, hbar, t_grid, mode="exact") / complex(psi(q))
        rel_error = abs(numeric - eigenvalue) / max(eigenvalue, hbar**2)
        if rel_error > VERIFY_TOL:
            logger.warning(f"Mode {k}: numeric_QE {numeric:.12g} differs from {eigenvalue:.12g} by {rel_error:.3g}")
        entries.append(SpectrumEntry(k=k, eigenvalue=eigenvalue, numeric=numeric, rel_error=rel_error))
    logger.info(f"Flat spectrum of {model.kind}: {len(entries)} modes with |k| <= {k_max}")
    return entries


def _axis_rule(metric, axis, nodes):
    low, high = metric.domain[axis]
    period = metric.periods[axis]
    if period is not None:
        return low + period * np.arange(nodes) / nodes, np.full(nodes, period / nodes)
    x, w = leggauss(nodes)
    half = 0.5 * (high - low)
    return low + half * (x + 1.0), half * w


def l2_inner_product(metric, phi, psi, nodes=None):
    """
    ⟨φ, ψ⟩ = ∫ conj(φ) ψ √det g dx over the chart domain.

    Periodic axes use the trapezoid rule, the others Gauss–Legendre, so the
    sphere in (θ, φ) gets Gauss–Legendre in θ times trapezoid in φ.

    Args:
        metric: ChartMetric
        phi: Callable (or TestFunction) on chart points (..., n)
        psi: Callable (or TestFunction) on chart points (..., n)
        nodes: Nodes per axis (default quantizer.inner_product_nodes)

    Returns:
        Complex inner product
    """
    nodes = nodes if nodes is not None else settings.get("quantizer", "inner_product_nodes")
    rules = [_axis_rule(metric, axis, nodes) for axis in range(metric.dim)]
    grids = np.meshgrid(*[x for x, _ in rules], indexing="ij")
    points = np.stack([grid.ravel() for grid in grids], axis=-1)
    weights = np.prod(np.stack([grid.ravel() for grid in np.meshgrid(*[w for _, w in rules], indexing="ij")]), axis=0)
    volume = np.sqrt(np.linalg.det(metric.g(points)))
    values = np.conj(np.asarray(phi(points), dtype=complex)) * np.asarray(psi(points), dtype=complex)
    return complex(np.sum(weights * volume * values))


def applied_operator(metric, psi, hbar=None, t_grid=None, mode=None, **options):
    """
    Q(E)ψ as a TestFunction, evaluating numeric_QE point by point.

    Args:
        metric: ChartMetric
        psi: TestFunction
        hbar, t_grid, mode, options: As for numeric_QE

    Returns:
        TestFunction of kind custom (no closed-form derivatives)
    """

    def value(x):
        x = np.asarray(x, dtype=float)
        flat = x.reshape(-1, metric.dim)
        out = np.array([numeric_QE(metric, psi, point, hbar, t_grid, mode, **options) for point in flat])
        return out.reshape(x.shape[:-1])

    return TestFunction(kind="custom", dim=metric.dim, value=value, params={"applied": psi.describe()})
