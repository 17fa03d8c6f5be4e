"""
The quantized kinetic energy Q(E) acting on a test function.

numeric_QE differentiates the Wick-rotated fiber integral at t = 0:
Q(E)ψ(q) = ħ d/dt j_t(q)|_{t=0}, estimated by extrapolating
(j_t(q) − ψ(q))/t to t = 0. analytic_QE evaluates −(ħ²/2)(Δ − S/6)ψ(q)
directly from the normal-coordinate jets.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .. import settings
from ..errors import ExtrapolationError, SpecValidationError
from ..geometry.curvature import CurvaturePack, curvature
from ..wick_quadrature.config import QuadratureConfig
from ..wick_quadrature.fiber import jt_quadrature, r_prime
from ..wick_quadrature.functions import normal_jets
from ..wick_quadrature.laplace import expansion_coefficients
from .richardson import richardson_limit

logger = logging.getLogger(__name__)

ROUNDING_FACTOR = 64.0 * np.finfo(float).eps


def _curvature(metric, q):
    return CurvaturePack.flat(metric.dim) if metric.is_flat else curvature(metric, q)


def analytic_QE(metric, psi, q, hbar=None, curv=None):
    """
    −(ħ²/2)(Δψ(q) − S(q)ψ(q)/6) with Δ taken in normal coordinates at q.

    Args:
        metric: ChartMetric
        psi: TestFunction
        q: Base point
        hbar: ħ (default quantizer.hbar)
        curv: CurvaturePack at q, if already computed

    Returns:
        Complex value
    """
    hbar = hbar if hbar is not None else settings.get("quantizer", "hbar")
    q = np.asarray(q, dtype=float)
    curv = curv if curv is not None else _curvature(metric, q)
    jets = normal_jets(psi, metric, q, None if metric.is_flat else curv.christoffel)
    _, a1 = expansion_coefficients(jets, curv.scalar, hbar)
    return complex(hbar * a1)


@dataclass(frozen=True)
class QEEstimate:
    """numeric_QE at one point with its extrapolation error and the j_t samples."""

    value: complex
    error: float
    t_grid: list
    jt_values: list
    r: float


def _checked_grid(t_grid):
    t_grid = sorted(float(t) for t in (t_grid if t_grid is not None else settings.get("quantizer", "t_grid")))
    if len(t_grid) < 2 or t_grid[0] <= 0 or len(set(t_grid)) != len(t_grid):
        raise SpecValidationError(f"t grid must hold at least two distinct positive values, got {t_grid}")
    return t_grid


def estimate_QE(metric, psi, q, hbar=None, t_grid=None, mode=None, scheme=None, nodes_per_axis=None, r=None):
    """
    ħ d/dt j_t(q) at t = 0 by Richardson extrapolation, with an error estimate.

    Args:
        metric: ChartMetric
        psi: TestFunction
        q: Base point
        hbar: ħ
        t_grid: Positive Wick times (sorted internally)
        mode: Integrand mode, taylor or exact
        scheme: Quadrature scheme
        nodes_per_axis: Quadrature nodes per axis
        r: Fiber radius shared by all t (default: min(r′, cutoff_sigmas √(t_max ħ)))

    Returns:
        QEEstimate

    Raises:
        ExtrapolationError: If successive extrapolation levels disagree beyond extrapolation_tol
    """
    hbar = hbar if hbar is not None else settings.get("quantizer", "hbar")
    t_grid = _checked_grid(t_grid)
    q = np.asarray(q, dtype=float)
    mode = mode if mode is not None else settings.get("quadrature", "mode")
    curv = None if mode == "exact" else _curvature(metric, q)
    jets = None if mode == "exact" else normal_jets(psi, metric, q, None if metric.is_flat else curv.christoffel)
    if r is None:
        r = settings.get("quadrature", "cutoff_sigmas") * math.sqrt(t_grid[-1] * hbar)
        if mode != "exact":
            r = r_prime(metric, q, r, curv)

    psi_q = complex(psi(q))
    jt_values = []
    for t in t_grid:
        cfg = QuadratureConfig.from_settings(t, r=r, hbar=hbar, mode=mode, scheme=scheme, nodes_per_axis=nodes_per_axis)
        jt_values.append(jt_quadrature(metric, psi, q, cfg, curv=curv, jets=jets))

    quotients = [(jt - psi_q) / t for jt, t in zip(jt_values, t_grid, strict=True)]
    result = richardson_limit(t_grid, quotients)
    floor = hbar * ROUNDING_FACTOR * max(1.0, abs(psi_q), max(abs(jt) for jt in jt_values)) / t_grid[0]
    value = hbar * result.value
    error = hbar * result.error + floor
    tol = settings.get("quantizer", "extrapolation_tol")
    if hbar * result.error > tol * max(abs(value), hbar * abs(psi_q)) + floor:
        raise ExtrapolationError(
            f"Extrapolation to t=0 did not settle at {q.tolist()}: levels differ by {hbar * result.error:.3g} "
            f"for a value of {abs(value):.3g}; use smaller t"
        )
    logger.debug(f"numeric_QE at {q.tolist()}: {value:.12g} +/- {error:.3g}")
    return QEEstimate(value=value, error=error, t_grid=t_grid, jt_values=jt_values, r=float(r))


def numeric_QE(metric, psi, q, hbar=None, t_grid=None, mode=None, **options):
    """
    Q(E)ψ(q) = ħ d/dt j_t(q)|_{t=0}; see estimate_QE for the options.

    Returns:
        Complex value (positive multiple of ψ for Fourier modes on flat models)
    """
    return estimate_QE(metric, psi, q, hbar, t_grid, mode, **options).value


@dataclass(frozen=True)
class QuantizationReport:
    """numeric_QE against analytic_QE over a grid of base points."""

    q_grid: list
    numeric_QE_psi: list
    analytic_QE_psi: list
    max_rel_error: float | None
    t_grid: list
    degenerate_points: list = field(default_factory=list)
    extrapolation_errors: list = field(default_factory=list)
    psi: str = ""
    hbar: float = 1.0
    mode: str = "taylor"

    def to_dict(self):
        """Plain mapping with complex numbers split into re/im, for report files."""

        def split(values):
            return [{"re": float(z.real), "im": float(z.imag)} for z in values]

        return {
            "psi": self.psi,
            "hbar": self.hbar,
            "mode": self.mode,
            "t_grid": list(self.t_grid),
            "max_rel_error": self.max_rel_error,
            "q_grid": [list(map(float, q)) for q in self.q_grid],
            "numeric_QE_psi": split(self.numeric_QE_psi),
            "analytic_QE_psi": split(self.analytic_QE_psi),
            "extrapolation_errors": list(map(float, self.extrapolation_errors)),
            "degenerate_points": [list(map(float, q)) for q in self.degenerate_points],
        }


def build_report(metric, psi, q_grid, hbar=None, t_grid=None, mode=None, jobs=None, **options):
    """
    Evaluate numeric_QE and analytic_QE over base points in a thread pool.

    Points where |analytic_QE| is below the degenerate threshold are left out
    of max_rel_error and listed in degenerate_points. Results keep the input
    order.

    Args:
        metric: ChartMetric
        psi: TestFunction
        q_grid: Base points
        hbar: ħ
        t_grid: Wick times
        mode: Integrand mode
        jobs: Worker threads (default cli.jobs)
        **options: Passed on to estimate_QE

    Returns:
        QuantizationReport
    """
    hbar = hbar if hbar is not None else settings.get("quantizer", "hbar")
    mode = mode if mode is not None else settings.get("quadrature", "mode")
    jobs = jobs if jobs is not None else settings.get("cli", "jobs")
    t_grid = _checked_grid(t_grid)
    q_grid = [np.asarray(q, dtype=float) for q in q_grid]

    def evaluate(q):
        estimate = estimate_QE(metric, psi, q, hbar, t_grid, mode, **options)
        return estimate, analytic_QE(metric, psi, q, hbar)

    with ThreadPoolExecutor(max_workers=max(1, int(jobs))) as pool:
        results = list(pool.map(evaluate, q_grid))

    threshold = settings.get("quantizer", "degenerate_threshold")
    relative = []
    degenerate = []
    for q, (estimate, analytic) in zip(q_grid, results, strict=True):
        if abs(analytic) > threshold:
            relative.append(abs(estimate.value - analytic) / abs(analytic))
        else:
            degenerate.append(q)
    if degenerate:
        logger.warning(f"{len(degenerate)} of {len(q_grid)} base points have |analytic_QE| <= {threshold:g}")
    max_rel_error = max(relative) if relative else None
    logger.info(f"Quantization report for {psi.describe()} on {metric.kind}: max relative error {max_rel_error}")
    return QuantizationReport(
        q_grid=q_grid,
        numeric_QE_psi=[estimate.value for estimate, _ in results],
        analytic_QE_psi=[analytic for _, analytic in results],
        max_rel_error=max_rel_error,
        t_grid=t_grid,
        degenerate_points=degenerate,
        extrapolation_errors=[estimate.error for estimate, _ in results],
        psi=psi.describe(),
        hbar=hbar,
        mode=mode,
    )
