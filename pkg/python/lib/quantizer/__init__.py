"""
Quantizer module - Q(E) by differentiating the Wick-rotated fiber integral,
compared with −(ħ²/2)(Δ − S/6), plus the prequantum flow and flat spectra.
"""

from .kinetic import QEEstimate, QuantizationReport, analytic_QE, build_report, estimate_QE, numeric_QE
from .prequantum import holomorphic_section_check, phase_grid, prequantum_flow, prequantum_generator
from .richardson import RichardsonResult, geometric_grid, richardson_limit
from .spectrum import SpectrumEntry, applied_operator, flat_spectrum, l2_inner_product

__all__ = [
    "QEEstimate",
    "QuantizationReport",
    "RichardsonResult",
    "SpectrumEntry",
    "analytic_QE",
    "applied_operator",
    "build_report",
    "estimate_QE",
    "flat_spectrum",
    "geometric_grid",
    "holomorphic_section_check",
    "l2_inner_product",
    "numeric_QE",
    "phase_grid",
    "prequantum_flow",
    "prequantum_generator",
    "richardson_limit",
]
