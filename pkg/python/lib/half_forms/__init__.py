"""
Half-form module - BKS pairing densities, real-time and Wick-rotated.
"""

from .pairing import (
    PairingDensity,
    bks_density_real,
    bks_density_wick,
    liouville_density,
    mean_remainder_bound,
    pulled_back_volume_taylor,
    ricci_quadratic,
    volume_remainder_constant,
)

__all__ = [
    "PairingDensity",
    "bks_density_real",
    "bks_density_wick",
    "liouville_density",
    "mean_remainder_bound",
    "pulled_back_volume_taylor",
    "ricci_quadratic",
    "volume_remainder_constant",
]
