"""
Points of T*M in chart coordinates and the functions defined on them.
"""

from dataclasses import dataclass

import numpy as np

from ..geometry.curvature import inverse_metric_jets


@dataclass(frozen=True)
class PhasePoint:
    """A point (x, p) of T*M: chart position x and covector components p."""

    x: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        x = np.atleast_1d(np.asarray(self.x, dtype=float))
        p = np.atleast_1d(np.asarray(self.p, dtype=float))
        if x.shape != p.shape or x.ndim != 1:
            raise ValueError(f"x and p must be 1-d arrays of equal length, got {x.shape} and {p.shape}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "p", p)

    @property
    def dim(self):
        return self.x.shape[0]

    def as_vector(self):
        """Concatenated (x; p) vector, the block order of flow jacobians."""
        return np.concatenate([self.x, self.p])

    @classmethod
    def from_vector(cls, z):
        z = np.asarray(z, dtype=float)
        n = z.shape[0] // 2
        return cls(z[:n], z[n:])


def kinetic_energy(metric, z):
    """
    E(x, p) = ½ g^{jk}(x) p_j p_k.

    Args:
        metric: ChartMetric
        z: PhasePoint

    Returns:
        Nonnegative float

    Raises:
        SingularMetricError: If g(x) is singular
    """
    ginv = metric.inverse_at(z.x)
    return 0.5 * float(z.p @ ginv @ z.p)


def rescale(z, t):
    """The fiber rescaling N_t: (x, p) ↦ (x, t p)."""
    return PhasePoint(z.x, t * z.p)


def canonical_one_form(z, v):
    """
    The canonical 1-form θ = p_j dx^j evaluated on a tangent vector.

    Args:
        z: PhasePoint
        v: Tangent vector of T*M at z in (x; p) block order

    Returns:
        θ_z(v)
    """
    v = np.asarray(v, dtype=float)
    return float(z.p @ v[: z.dim])


def hamiltonian_vector_field(metric, z):
    """
    X_E at z in (x; p) block order: ẋ = g^{-1} p, ṗ_j = −½ ∂_j g^{kl} p_k p_l.
    """
    metric.require_interior(z.x, levels=1)
    ginv, d_ginv, _ = inverse_metric_jets(metric, z.x, second=False)
    xdot = ginv @ z.p
    pdot = -0.5 * np.einsum("akl,k,l->a", d_ginv, z.p, z.p)
    return np.concatenate([xdot, pdot])
