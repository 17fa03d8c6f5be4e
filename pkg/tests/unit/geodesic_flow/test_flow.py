"""
Unit tests for geodesic_flow: phase space, the symplectic integrator, the flow and conjugate points.
"""

import math

import numpy as np
import pytest

from python.lib.errors import ChartExitError, DomainError
from python.lib.geodesic_flow import (
    PhasePoint,
    advance,
    canonical_one_form,
    exponential_map,
    find_conjugate_time,
    flow,
    hamiltonian_vector_field,
    kinetic_energy,
    rescale,
    trajectory,
    transversality_det,
)
from python.lib.geodesic_flow.flow import default_steps
from python.lib.geometry import hyperbolic_halfplane


def symplectic_form(n):
    return np.block([[np.zeros((n, n)), np.eye(n)], [-np.eye(n), np.zeros((n, n))]])


def interior_sample(metric, rng):
    """A random phase point well inside the chart whose covector has length below one."""
    low, high = metric.domain[:, 0], metric.domain[:, 1]
    x = low + (high - low) * rng.uniform(0.35, 0.65, metric.dim)
    u = rng.uniform(-0.5, 0.5, metric.dim)
    return PhasePoint(x, u / np.sqrt(np.diag(metric.inverse_at(x))))


class TestPhaseSpace:
    """Kinetic energy, rescaling and the canonical 1-form."""

    def test_flat_energy(self, torus):
        assert kinetic_energy(torus, PhasePoint([1.0, 1.0], [3.0, 4.0])) == pytest.approx(12.5)

    def test_zero_momentum(self, sphere):
        assert kinetic_energy(sphere, PhasePoint([1.0, 1.0], [0.0, 0.0])) == 0.0

    def test_sphere_equator(self, sphere):
        assert kinetic_energy(sphere, PhasePoint([math.pi / 2, 0.0], [0.0, 2.0])) == pytest.approx(2.0)

    def test_rescale_identity(self):
        z = PhasePoint([0.1, 0.2], [0.3, 0.4])
        scaled = rescale(z, 1.0)
        np.testing.assert_array_equal(scaled.x, z.x)
        np.testing.assert_array_equal(scaled.p, z.p)

    def test_mismatched_lengths(self):
        with pytest.raises(ValueError):
            PhasePoint([0.0, 1.0], [1.0])

    def test_vector_round_trip(self):
        z = PhasePoint([0.1, 0.2], [0.3, 0.4])
        np.testing.assert_array_equal(PhasePoint.from_vector(z.as_vector()).p, z.p)

    def test_one_form_scales_with_fiber(self):
        z = PhasePoint([0.1, 0.2], [0.3, -0.4])
        v = np.array([1.0, 2.0, 5.0, 7.0])
        assert canonical_one_form(rescale(z, 3.0), v) == pytest.approx(3.0 * canonical_one_form(z, v))

    def test_vector_field_flat(self, torus):
        field = hamiltonian_vector_field(torus, PhasePoint([1.0, 1.0], [0.5, -0.25]))
        np.testing.assert_allclose(field, [0.5, -0.25, 0.0, 0.0], atol=1e-10)


class TestRescalingIdentities:
    """E∘N_t = t²E and N_t∘Φ_{tσ} = Φ_σ∘N_t on every built-in manifold."""

    @pytest.mark.parametrize("name", ["s1", "torus", "sphere", "hyperbolic", "revolution"])
    def test_energy_scaling(self, request, name):
        metric = request.getfixturevalue(name)
        rng = np.random.default_rng(7)
        for _ in range(5):
            z = interior_sample(metric, rng)
            t = rng.uniform(0.2, 3.0)
            assert kinetic_energy(metric, rescale(z, t)) == pytest.approx(t**2 * kinetic_energy(metric, z), rel=1e-12)

    @pytest.mark.parametrize("name", ["s1", "torus", "sphere", "hyperbolic", "revolution"])
    def test_flow_commutes_with_rescaling(self, request, name):
        metric = request.getfixturevalue(name)
        rng = np.random.default_rng(11)
        t, sigma = 0.5, 0.3
        for _ in range(3):
            z = interior_sample(metric, rng)
            left = rescale(flow(metric, z, t * sigma, steps=100).point, t)
            right = flow(metric, rescale(z, t), sigma, steps=100).point
            np.testing.assert_allclose(left.x, right.x, atol=1e-9)
            np.testing.assert_allclose(left.p, right.p, atol=1e-9)


class TestFlow:
    """Closed-form trajectories and flow invariants."""

    def test_straight_lines(self, torus):
        z0 = PhasePoint([0.5, 1.0], [0.3, -0.7])
        state = flow(torus, z0, 2.0)
        np.testing.assert_allclose(state.point.x, [0.5 + 0.6, 1.0 - 1.4], atol=1e-10)
        np.testing.assert_allclose(state.point.p, z0.p, atol=1e-10)

    def test_zero_time_is_identity(self, sphere):
        z0 = PhasePoint([1.0, 0.5], [0.2, 0.1])
        state = flow(sphere, z0, 0.0)
        np.testing.assert_array_equal(state.jacobian, np.eye(4))
        assert state.sigma == 0.0

    def test_great_circle_period(self, sphere, equator_geodesic):
        x, p = equator_geodesic
        state = flow(sphere, PhasePoint(x, p), 2.0 * math.pi, steps=2000)
        np.testing.assert_allclose(state.point.x, [math.pi / 2, 2.0 * math.pi], atol=1e-8)
        np.testing.assert_allclose(state.point.p, p, atol=1e-8)

    def test_energy_conservation(self, sphere):
        state = flow(sphere, PhasePoint([1.0, 0.0], [0.4, 0.6]), 1.0)
        assert state.energy_drift(sphere) <= 1e-9

    def test_symplectic_jacobian(self, sphere):
        state = flow(sphere, PhasePoint([1.0, 0.0], [0.4, 0.6]), 1.0)
        jac = state.jacobian
        omega = symplectic_form(2)
        np.testing.assert_allclose(jac.T @ omega @ jac, omega, atol=1e-8)
        assert np.linalg.det(jac) == pytest.approx(1.0, abs=1e-8)

    def test_reversibility(self, hyperbolic):
        z0 = PhasePoint([0.2, 1.0], [0.3, 0.4])
        forward = flow(hyperbolic, z0, 0.8)
        back = advance(hyperbolic, forward, -0.8)
        np.testing.assert_allclose(back.point.x, z0.x, atol=1e-8)
        np.testing.assert_allclose(back.point.p, z0.p, atol=1e-8)

    def test_chart_exit(self):
        metric = hyperbolic_halfplane(domain=[[-1.0, 1.0], [0.5, 2.0]])
        with pytest.raises(ChartExitError) as info:
            flow(metric, PhasePoint([0.0, 1.0], [0.0, -1.0]), 5.0)
        assert 0.0 < info.value.exit_time < 5.0

    def test_start_outside(self, hyperbolic):
        with pytest.raises(DomainError):
            flow(hyperbolic, PhasePoint([0.0, -1.0], [0.0, 1.0]), 1.0)

    def test_trajectory_samples(self, torus):
        states = trajectory(torus, PhasePoint([0.0, 0.0], [1.0, 0.0]), 1.0, samples=4)
        assert [s.sigma for s in states] == pytest.approx([0.0, 0.25, 0.5, 0.75, 1.0])

    def test_default_steps(self):
        assert default_steps(0.5, steps_per_unit=1000) == 500
        assert default_steps(1e-6, steps_per_unit=1000) == 1

    def test_exponential_map_flat(self, torus):
        state = exponential_map(torus, [1.0, 1.0], [0.2, 0.3])
        np.testing.assert_allclose(state.point.x, [1.2, 1.3], atol=1e-10)


class TestTransversality:
    """The Jacobi block determinant and conjugate points."""

    @pytest.mark.parametrize("sigma", [0.5, 1.0, 2.5])
    def test_flat_power_law(self, torus, sigma):
        assert transversality_det(torus, PhasePoint([1.0, 1.0], [0.3, 0.1]), sigma) == pytest.approx(
            sigma**2, abs=1e-9
        )

    def test_zero_time(self, sphere):
        assert transversality_det(sphere, PhasePoint([1.0, 1.0], [0.3, 0.1]), 0.0) == 0.0

    def test_small_time_limit(self, sphere):
        x = [1.0, 0.5]
        sigma = 1e-3
        ratio = transversality_det(sphere, PhasePoint(x, [0.01, 0.02]), sigma) / sigma**2
        expected = np.linalg.det(sphere.inverse_at(x))
        assert ratio == pytest.approx(expected, rel=1e-4)

    def test_sphere_conjugate_point(self, sphere, equator_geodesic):
        x, p = equator_geodesic
        found = find_conjugate_time(sphere, PhasePoint(x, p), 4.0)
        assert found == pytest.approx(math.pi, abs=1e-6)

    def test_flat_has_none(self, torus):
        assert find_conjugate_time(torus, PhasePoint([1.0, 1.0], [1.0, 0.0]), 3.0, samples=20) is None
