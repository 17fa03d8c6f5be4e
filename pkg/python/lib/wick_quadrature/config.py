"""
Settings of one Wick-rotated fiber quadrature.
"""

import math
from dataclasses import dataclass, replace

from .. import settings
from ..errors import SpecValidationError

SCHEMES = ("gauss_hermite_truncated", "tensor_trapezoid")
MODES = ("taylor", "exact")


@dataclass(frozen=True)
class QuadratureConfig:
    """Fiber cutoff radius r, Wick time t, ħ, node count, scheme and integrand mode."""

    r: float
    t: float
    hbar: float = 1.0
    nodes_per_axis: int = 64
    scheme: str = "gauss_hermite_truncated"
    mode: str = "taylor"

    def __post_init__(self):
        if not self.t > 0:
            raise SpecValidationError(f"Wick time t must be positive, got {self.t}")
        if not self.hbar > 0:
            raise SpecValidationError(f"hbar must be positive, got {self.hbar}")
        if not self.r > 0:
            raise SpecValidationError(f"Fiber radius r must be positive, got {self.r}")
        if self.nodes_per_axis < 2:
            raise SpecValidationError(f"nodes_per_axis must be at least 2, got {self.nodes_per_axis}")
        if self.scheme not in SCHEMES:
            raise SpecValidationError(
                f"Unknown quadrature scheme: {self.scheme} (expected one of {', '.join(SCHEMES)})"
            )
        if self.mode not in MODES:
            raise SpecValidationError(f"Unknown integrand mode: {self.mode} (expected taylor or exact)")

    @property
    def width(self):
        """Standard deviation √(tħ) of the fiber Gaussian."""
        return math.sqrt(self.t * self.hbar)

    @classmethod
    def from_settings(cls, t, r=None, hbar=None, **overrides):
        """
        Build a config from the quadrature section of wickflow.yaml.

        Args:
            t: Wick time
            r: Fiber radius (default: cutoff_sigmas standard deviations)
            hbar: ħ (default: quantizer.hbar)
            **overrides: nodes_per_axis, scheme or mode

        Returns:
            QuadratureConfig
        """
        hbar = hbar if hbar is not None else settings.get("quantizer", "hbar")
        if r is None:
            r = settings.get("quadrature", "cutoff_sigmas") * math.sqrt(t * hbar)
        values = {
            "nodes_per_axis": settings.get("quadrature", "nodes_per_axis"),
            "scheme": settings.get("quadrature", "scheme"),
            "mode": settings.get("quadrature", "mode"),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(r=float(r), t=float(t), hbar=float(hbar), **values)

    def with_nodes(self, nodes_per_axis):
        return replace(self, nodes_per_axis=nodes_per_axis)
