"""
Unit tests for QuadratureConfig.
"""

import math

import pytest

from python.lib.errors import SpecValidationError
from python.lib.wick_quadrature import QuadratureConfig


class TestQuadratureConfig:
    """Validation and construction from settings."""

    def test_from_settings_defaults(self):
        cfg = QuadratureConfig.from_settings(0.01)
        assert cfg.r == pytest.approx(0.8)
        assert cfg.hbar == 1.0
        assert cfg.nodes_per_axis == 64
        assert cfg.scheme == "gauss_hermite_truncated"
        assert cfg.mode == "taylor"

    def test_from_settings_overrides(self):
        cfg = QuadratureConfig.from_settings(0.04, r=1.5, hbar=0.5, mode="exact", scheme=None)
        assert cfg.r == 1.5
        assert cfg.mode == "exact"
        assert cfg.scheme == "gauss_hermite_truncated"
        assert cfg.width == pytest.approx(math.sqrt(0.02))

    def test_with_nodes(self):
        cfg = QuadratureConfig(r=1.0, t=0.01).with_nodes(16)
        assert cfg.nodes_per_axis == 16
        assert cfg.r == 1.0

    @pytest.mark.parametrize(
        "overrides",
        [
            {"t": 0.0},
            {"hbar": -1.0},
            {"r": 0.0},
            {"nodes_per_axis": 1},
            {"scheme": "simpson"},
            {"mode": "analytic"},
        ],
    )
    def test_rejected(self, overrides):
        values = {"r": 1.0, "t": 0.01}
        values.update(overrides)
        with pytest.raises(SpecValidationError):
            QuadratureConfig(**values)
