"""
Unit tests for fiber tail masses and their exponential decay.
"""

import math

import numpy as np
import pytest
from scipy.special import erfc

from python.lib.wick_quadrature import decay_rate, tail_mass
from python.lib.wick_quadrature.tails import sphere_rule

T_VALUES = [0.005, 0.01, 0.02]


def line_tail(r0, r, t):
    """∫_{r0<|p|<r} e^{−p²/2t} dp."""
    scale = math.sqrt(2.0 * t)
    return math.sqrt(2.0 * math.pi * t) * (erfc(r0 / scale) - erfc(r / scale))


class TestSphereRule:
    @pytest.mark.parametrize("n,area", [(1, 2.0), (2, 2.0 * math.pi), (3, 4.0 * math.pi)])
    def test_total_weight(self, n, area):
        directions, weights = sphere_rule(n)
        assert np.sum(weights) == pytest.approx(area)
        np.testing.assert_allclose(np.linalg.norm(directions, axis=-1), 1.0)

    def test_unsupported_dimension(self):
        with pytest.raises(ValueError):
            sphere_rule(4)


class TestTailMass:
    """Measured tails against closed forms and the analytic bound."""

    def test_line_closed_form(self, s1):
        estimate = tail_mass(s1, [0.3], 1.0, 3.0, 0.1)
        assert estimate.tail == pytest.approx(line_tail(1.0, 3.0, 0.1), rel=1e-6)

    def test_plane_closed_form(self, torus):
        t = 0.1
        estimate = tail_mass(torus, [0.3, 0.1], 1.0, 3.0, t)
        expected = 2.0 * math.pi * t * (math.exp(-1.0 / (2.0 * t)) - math.exp(-9.0 / (2.0 * t)))
        assert estimate.tail == pytest.approx(expected, rel=1e-6)

    def test_hbar_enters_through_product(self, s1):
        left = tail_mass(s1, [0.3], 1.0, 3.0, 0.1, hbar=0.5).tail
        right = tail_mass(s1, [0.3], 1.0, 3.0, 0.05).tail
        assert left == pytest.approx(right, rel=1e-9)

    @pytest.mark.parametrize("t", T_VALUES + [2.0])
    def test_bounded(self, s1, t):
        estimate = tail_mass(s1, [0.3], 1.0, 4.0, t)
        assert 0.0 < estimate.tail <= estimate.bound

    def test_weighted_function(self, s1):
        plain = tail_mass(s1, [0.3], 1.0, 3.0, 0.1).tail
        doubled = tail_mass(s1, [0.3], 1.0, 3.0, 0.1, f=lambda p: 2.0 * np.ones(np.shape(p)[:-1])).tail
        assert doubled == pytest.approx(2.0 * plain)

    @pytest.mark.parametrize("r0,r", [(0.0, 1.0), (2.0, 1.0), (1.0, 1.0)])
    def test_radii(self, s1, r0, r):
        with pytest.raises(ValueError):
            tail_mass(s1, [0.3], r0, r, 0.1)


class TestDecayRate:
    """Fitted λ in tail ∝ e^{−λ/t} approaches r0²/2ħ."""

    @pytest.mark.parametrize("r0", [1.0, 2.0])
    def test_rate(self, s1, r0):
        estimates = [tail_mass(s1, [0.3], r0, 4.0, t) for t in T_VALUES]
        assert decay_rate(estimates) == pytest.approx(0.5 * r0**2, rel=0.05)

    def test_rate_scales_with_square_radius(self, s1):
        rates = [decay_rate([tail_mass(s1, [0.3], r0, 4.0, t) for t in T_VALUES]) for r0 in (1.0, 2.0)]
        assert rates[1] / rates[0] == pytest.approx(4.0, rel=0.05)
