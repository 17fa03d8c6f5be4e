"""
Small-t Laplace expansion j_t^r(q) ∼ a0 + a1 t + O(t²).
"""

import logging
from dataclasses import dataclass

import numpy as np

from .. import settings
from ..geometry.curvature import CurvaturePack, curvature
from .config import QuadratureConfig
from .fiber import jt_quadrature
from .functions import normal_jets

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExpansionResult:
    """Laplace coefficients a0, a1 together with a quadrature value at t_used."""

    a0: complex
    a1: complex
    t_used: float
    jt_numeric: complex
    residual: float

    def predicted(self, t):
        return self.a0 + self.a1 * t


def expansion_coefficients(jets, scalar, hbar):
    """
    a0 = ψ(q) and a1 = −(ħ/2)(Δψ(q) − S(q)ψ(q)/6).

    The Gaussian moments are taken over the whole fiber: ⟨p_j p_k⟩ = tħ δ_jk,
    the odd ones vanish.
    """
    a0 = jets.value
    a1 = -0.5 * hbar * (jets.laplacian - scalar * a0 / 6.0)
    return a0, a1


def laplace_expansion(metric, psi, q, hbar=None, t=None, cfg=None, curv=None):
    """
    Laplace coefficients of j_t^r(q) and the residual of a quadrature check.

    Args:
        metric: ChartMetric
        psi: TestFunction
        q: Base point
        hbar: ħ (default quantizer.hbar)
        t: Wick time of the quadrature check (default: first entry of quantizer.t_grid)
        cfg: QuadratureConfig for the check (built from settings when omitted)
        curv: CurvaturePack at q, if already computed

    Returns:
        ExpansionResult with residual |j_t − (a0 + a1 t)|
    """
    q = np.asarray(q, dtype=float)
    if cfg is not None:
        hbar, t = cfg.hbar, cfg.t
    hbar = hbar if hbar is not None else settings.get("quantizer", "hbar")
    t = t if t is not None else settings.get("quantizer", "t_grid")[0]
    if curv is None:
        curv = CurvaturePack.flat(metric.dim) if metric.is_flat else curvature(metric, q)
    jets = normal_jets(psi, metric, q, None if metric.is_flat else curv.christoffel)
    a0, a1 = expansion_coefficients(jets, curv.scalar, hbar)

    cfg = cfg if cfg is not None else QuadratureConfig.from_settings(t, hbar=hbar)
    jt = jt_quadrature(metric, psi, q, cfg, curv=curv, jets=jets)
    residual = abs(jt - (a0 + a1 * t))
    logger.debug(f"Laplace expansion at {q.tolist()}: a0={a0:.12g}, a1={a1:.12g}, residual {residual:.3g} at t={t:g}")
    return ExpansionResult(a0=a0, a1=a1, t_used=t, jt_numeric=jt, residual=residual)
