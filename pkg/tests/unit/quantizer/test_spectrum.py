"""
Unit tests for flat-model spectra, L² inner products and the applied operator.
"""

import math

import numpy as np
import pytest

from python.lib.errors import SpecValidationError
from python.lib.quantizer import applied_operator, flat_spectrum, l2_inner_product
from python.lib.wick_quadrature import constant, fourier_mode, linear_combination, spherical_harmonic


class TestFlatSpectrum:
    """Eigenvalues ħ²|k|²/2 of Fourier modes, each checked by numeric_QE."""

    def test_circle(self, s1):
        entries = flat_spectrum(s1, k_max=3)
        assert [entry.k for entry in entries] == [(0,), (-1,), (1,), (-2,), (2,), (-3,), (3,)]
        assert [entry.eigenvalue for entry in entries] == [0.0, 0.5, 0.5, 2.0, 2.0, 4.5, 4.5]
        assert max(entry.rel_error for entry in entries) < 1e-6

    def test_torus_ordering(self, torus):
        entries = flat_spectrum(torus, k_max=1)
        assert [entry.k for entry in entries] == [(0, 0), (-1, 0), (0, -1), (0, 1), (1, 0)]

    def test_hbar_scaling(self, s1):
        entries = flat_spectrum(s1, hbar=0.5, k_max=2)
        assert entries[-1].eigenvalue == pytest.approx(0.5)
        assert entries[-1].numeric.real == pytest.approx(0.5, rel=1e-6)

    def test_needs_flat_model(self, sphere):
        with pytest.raises(SpecValidationError):
            flat_spectrum(sphere)

    def test_negative_cutoff(self, s1):
        with pytest.raises(SpecValidationError):
            flat_spectrum(s1, k_max=-1)


class TestInnerProduct:
    """⟨φ, ψ⟩ = ∫ conj(φ) ψ √det g dx."""

    def test_circle_modes(self, s1):
        assert l2_inner_product(s1, fourier_mode([1]), fourier_mode([1])) == pytest.approx(2.0 * math.pi)
        assert abs(l2_inner_product(s1, fourier_mode([1]), fourier_mode([2]))) < 1e-12

    def test_torus_volume(self, torus):
        one = constant(1.0, dim=2)
        assert l2_inner_product(torus, one, one) == pytest.approx(4.0 * math.pi**2)

    def test_sphere_harmonics_orthonormal(self, sphere):
        y10, y11 = spherical_harmonic(1, 0), spherical_harmonic(1, 1)
        assert l2_inner_product(sphere, y10, y10) == pytest.approx(1.0, abs=1e-10)
        assert l2_inner_product(sphere, y11, y11) == pytest.approx(1.0, abs=1e-10)
        assert abs(l2_inner_product(sphere, y10, y11)) < 1e-12

    def test_sphere_area(self, sphere):
        one = constant(1.0, dim=2)
        assert l2_inner_product(sphere, one, one) == pytest.approx(4.0 * math.pi, rel=1e-10)


class TestAppliedOperator:
    """Q(E)ψ as a function on M and its symmetry."""

    def test_circle_mode(self, s1):
        applied = applied_operator(s1, fourier_mode([2]), mode="exact")
        x = np.array([[0.1], [0.5]])
        np.testing.assert_allclose(applied(x), 2.0 * np.exp(2j * x[:, 0]), rtol=1e-6)

    def test_symmetric_on_torus(self, torus):
        cosine = linear_combination([(0.5, fourier_mode([1, 0])), (0.5, fourier_mode([-1, 0]))])
        sine = linear_combination([(-0.5j, fourier_mode([0, 1])), (0.5j, fourier_mode([0, -1]))])
        other = cosine + sine
        options = {"mode": "exact", "nodes_per_axis": 16}
        left = l2_inner_product(torus, applied_operator(torus, cosine, **options), other, nodes=8)
        right = l2_inner_product(torus, cosine, applied_operator(torus, other, **options), nodes=8)
        assert left == pytest.approx(math.pi**2, rel=1e-6)
        assert right == pytest.approx(math.pi**2, rel=1e-6)
