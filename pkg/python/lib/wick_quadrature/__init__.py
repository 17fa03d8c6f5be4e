"""
Wick-rotated fiber quadrature - j_t^r(q) by quadrature and by Laplace expansion,
Gaussian moments, validity radius, tail bounds and the real-time counterexample.
"""

from .config import MODES, SCHEMES, QuadratureConfig
from .divergence import (
    PartialValue,
    fresnel_limit,
    gaussian_model_limit,
    gaussian_wick_model,
    real_time_divergence_demo,
)
from .fiber import jt_exact_model, jt_quadrature, psi_flow_taylor, r_prime, sampled_r_prime
from .functions import (
    BUILTIN_TEST_FUNCTIONS,
    NormalJets,
    TestFunction,
    constant,
    custom,
    fourier_mode,
    linear_combination,
    normal_jets,
    parse_psi,
    polynomial,
    spherical_harmonic,
)
from .laplace import ExpansionResult, expansion_coefficients, laplace_expansion
from .moments import gaussian_moment
from .tails import TailEstimate, decay_rate, tail_mass

__all__ = [
    "BUILTIN_TEST_FUNCTIONS",
    "MODES",
    "SCHEMES",
    "ExpansionResult",
    "NormalJets",
    "PartialValue",
    "QuadratureConfig",
    "TailEstimate",
    "TestFunction",
    "constant",
    "custom",
    "decay_rate",
    "expansion_coefficients",
    "fourier_mode",
    "fresnel_limit",
    "gaussian_model_limit",
    "gaussian_moment",
    "gaussian_wick_model",
    "jt_exact_model",
    "jt_quadrature",
    "laplace_expansion",
    "linear_combination",
    "normal_jets",
    "parse_psi",
    "polynomial",
    "psi_flow_taylor",
    "r_prime",
    "real_time_divergence_demo",
    "sampled_r_prime",
    "spherical_harmonic",
    "tail_mass",
]
