"""
Geodesic flow module - Hamiltonian flow of E = ½|p|² on T*M, its tangent map and conjugate points.
"""

from .flow import (
    FlowState,
    advance,
    exponential_map,
    find_conjugate_time,
    flow,
    trajectory,
    transversality_det,
)
from .integrator import LeapfrogIntegrator
from .phase_space import PhasePoint, canonical_one_form, hamiltonian_vector_field, kinetic_energy, rescale

__all__ = [
    "FlowState",
    "LeapfrogIntegrator",
    "PhasePoint",
    "advance",
    "canonical_one_form",
    "exponential_map",
    "find_conjugate_time",
    "flow",
    "hamiltonian_vector_field",
    "kinetic_energy",
    "rescale",
    "trajectory",
    "transversality_det",
]
