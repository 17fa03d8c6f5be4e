"""
Test functions ψ on a chart and their jets in normal coordinates.

A TestFunction evaluates on chart points of shape (..., n). Its first and
second chart derivatives come from closed forms for the built-ins and from
central finite differences otherwise. Fourier modes and polynomials are
entire, so the same closed form evaluated at q + ip is the holomorphic
continuation ψ_ℂ(q + ip) used by the exact integrand mode on flat models.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import lpmv

from .. import settings
from ..errors import SpecValidationError
from ..geometry.curvature import christoffel
from ..geometry.finite_differences import gradient, hessian
from ..geometry.normal_frame import normal_frame

logger = logging.getLogger(__name__)

KINDS = ("fourier_mode", "spherical_harmonic", "polynomial", "custom")

BUILTIN_TEST_FUNCTIONS = {
    "const": {"c": "float, default 1"},
    "fourier_mode": {"k": "integers, one per chart axis"},
    "polynomial": {"coeffs": "floats c0,c1,... in increasing degree", "axis": "chart axis, default 0"},
    "spherical_harmonic": {"l": "integer >= 0", "m": "integer, |m| <= l"},
}


@dataclass(frozen=True)
class TestFunction:
    """A function ψ on a chart with optional closed-form derivatives."""

    __test__ = False

    kind: str
    dim: int
    value: Callable[[np.ndarray], np.ndarray]
    params: dict = field(default_factory=dict)
    grad_fn: Callable[[np.ndarray], np.ndarray] | None = None
    hess_fn: Callable[[np.ndarray], np.ndarray] | None = None
    holomorphic: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SpecValidationError(f"Unknown test function kind: {self.kind}")

    def __call__(self, x):
        return np.asarray(self.value(np.asarray(x, dtype=float)), dtype=complex)

    def _fd(self, metric):
        if metric is not None:
            return metric.fd_step, metric.fd_order
        return settings.get("geometry", "fd_step"), settings.get("geometry", "fd_order")

    def grad(self, x, metric=None):
        """Chart gradient ∂_j ψ at a single point."""
        x = np.asarray(x, dtype=float)
        if self.grad_fn is not None:
            return np.asarray(self.grad_fn(x), dtype=complex)
        h, order = self._fd(metric)
        return np.asarray(gradient(self, x, h, order), dtype=complex)

    def hess(self, x, metric=None):
        """Chart Hessian ∂_j ∂_k ψ at a single point."""
        x = np.asarray(x, dtype=float)
        if self.hess_fn is not None:
            return np.asarray(self.hess_fn(x), dtype=complex)
        h, order = self._fd(metric)
        return np.asarray(hessian(self, x, h, order), dtype=complex)

    def continued(self, q, p):
        """
        Holomorphic continuation ψ_ℂ(q + ip).

        Raises:
            SpecValidationError: If ψ has no closed-form continuation
        """
        if not self.holomorphic:
            raise SpecValidationError(
                f"{self.describe()} has no holomorphic continuation; use the taylor integrand mode"
            )
        w = np.asarray(q, dtype=float) + 1j * np.asarray(p, dtype=float)
        return np.asarray(self.value(w), dtype=complex)

    def describe(self):
        if not self.params:
            return self.kind
        return self.kind + ":" + ";".join(f"{key}={value}" for key, value in self.params.items())

    def __add__(self, other):
        return linear_combination([(1.0, self), (1.0, other)])

    def __sub__(self, other):
        return linear_combination([(1.0, self), (-1.0, other)])

    def __mul__(self, scalar):
        return linear_combination([(scalar, self)])

    __rmul__ = __mul__


def linear_combination(terms):
    """
    Σ c_i ψ_i as a new TestFunction.

    Closed-form derivatives and the holomorphic continuation survive only if
    every term has them.

    Args:
        terms: List of (coefficient, TestFunction) pairs of equal dimension

    Returns:
        TestFunction of kind custom
    """
    terms = [(complex(c), f) for c, f in terms]
    dims = {f.dim for _, f in terms}
    if len(dims) != 1:
        raise SpecValidationError(f"Cannot combine test functions of dimensions {sorted(dims)}")

    def combine(attribute):
        if any(getattr(f, attribute) is None for _, f in terms):
            return None

        def evaluate(x):
            return sum(c * np.asarray(getattr(f, attribute)(x), dtype=complex) for c, f in terms)

        return evaluate

    return TestFunction(
        kind="custom",
        dim=dims.pop(),
        value=combine("value"),
        params={"terms": [(f"{c:g}", f.describe()) for c, f in terms]},
        grad_fn=combine("grad_fn"),
        hess_fn=combine("hess_fn"),
        holomorphic=all(f.holomorphic for _, f in terms),
    )


def fourier_mode(k):
    """e^{ik·x} for an integer wave vector k."""
    k_int = [int(component) for component in np.atleast_1d(k)]
    wave = np.asarray(k_int, dtype=float)

    def value(x):
        return np.exp(1j * (x @ wave))

    def grad_fn(x):
        return 1j * wave * value(x)

    def hess_fn(x):
        return -np.outer(wave, wave) * value(x)

    return TestFunction(
        kind="fourier_mode",
        dim=len(k_int),
        value=value,
        params={"k": ",".join(str(component) for component in k_int)},
        grad_fn=grad_fn,
        hess_fn=hess_fn,
        holomorphic=True,
    )


def _falling(e, order):
    return math.prod(range(e - order + 1, e + 1))


def polynomial(coefficients, dim=1, axis=0):
    """
    A polynomial in the chart coordinates.

    Args:
        coefficients: Either a mapping {exponent tuple: coefficient} or a list
            of coefficients in increasing degree along ``axis``
        dim: Chart dimension
        axis: Axis of a univariate coefficient list

    Returns:
        TestFunction of kind polynomial
    """
    if isinstance(coefficients, dict):
        terms = [(tuple(int(e) for e in exps), complex(c)) for exps, c in coefficients.items()]
        label = {"terms": {",".join(map(str, exps)): f"{c:g}" for exps, c in terms}}
    else:
        if not 0 <= axis < dim:
            raise SpecValidationError(f"Polynomial axis {axis} is outside 0..{dim - 1}")
        terms = []
        for degree, c in enumerate(coefficients):
            exps = [0] * dim
            exps[axis] = degree
            terms.append((tuple(exps), complex(c)))
        label = {"coeffs": ",".join(f"{complex(c).real:g}" for c in coefficients), "axis": axis}
    for exps, _ in terms:
        if len(exps) != dim or min(exps) < 0:
            raise SpecValidationError(f"Exponent {exps} does not fit a {dim}-dimensional polynomial")

    def derivative(x, orders):
        x = np.asarray(x)
        total = np.zeros(x.shape[:-1], dtype=complex)
        for exps, c in terms:
            if any(e < o for e, o in zip(exps, orders, strict=True)):
                continue
            factor = c * math.prod(_falling(e, o) for e, o in zip(exps, orders, strict=True))
            monomial = np.ones(x.shape[:-1], dtype=complex)
            for a, (e, o) in enumerate(zip(exps, orders, strict=True)):
                monomial = monomial * x[..., a] ** (e - o)
            total = total + factor * monomial
        return total

    unit = np.eye(dim, dtype=int)

    def value(x):
        return derivative(x, [0] * dim)

    def grad_fn(x):
        return np.array([derivative(x, unit[j]) for j in range(dim)])

    def hess_fn(x):
        return np.array([[derivative(x, unit[j] + unit[k]) for k in range(dim)] for j in range(dim)])

    return TestFunction(
        kind="polynomial", dim=dim, value=value, params=label, grad_fn=grad_fn, hess_fn=hess_fn, holomorphic=True
    )


def constant(c=1.0, dim=1):
    """ψ ≡ c, the degree-zero polynomial."""
    f = polynomial({(0,) * dim: c}, dim=dim)
    return TestFunction(
        kind="polynomial",
        dim=dim,
        value=f.value,
        params={"c": f"{complex(c).real:g}"},
        grad_fn=f.grad_fn,
        hess_fn=f.hess_fn,
        holomorphic=True,
    )


def spherical_harmonic(l, m, chart="spherical"):
    """
    Orthonormal spherical harmonic Y_l^m on the unit sphere.

    Uses the Condon–Shortley phase of ``scipy.special.lpmv`` and
    Y_l^{−m} = (−1)^m conj(Y_l^m). Derivatives are taken by finite differences.

    Args:
        l: Degree
        m: Order, |m| <= l
        chart: "spherical" (θ, φ) or "stereographic" (θ = 2 arctan|u|)
    """
    l, m = int(l), int(m)
    if l < 0 or abs(m) > l:
        raise SpecValidationError(f"Spherical harmonic needs l >= 0 and |m| <= l, got l={l}, m={m}")
    if chart not in ("spherical", "stereographic"):
        raise SpecValidationError(f"Unknown sphere chart: {chart}")
    order = abs(m)
    norm = math.sqrt((2 * l + 1) / (4.0 * math.pi) * math.factorial(l - order) / math.factorial(l + order))

    def angles(x):
        if chart == "spherical":
            return x[..., 0], x[..., 1]
        return 2.0 * np.arctan(np.hypot(x[..., 0], x[..., 1])), np.arctan2(x[..., 1], x[..., 0])

    def value(x):
        theta, phi = angles(np.asarray(x, dtype=float))
        y = norm * lpmv(order, l, np.cos(theta)) * np.exp(1j * order * phi)
        if m < 0:
            y = (-1) ** order * np.conj(y)
        return y

    return TestFunction(kind="spherical_harmonic", dim=2, value=value, params={"l": l, "m": m, "chart": chart})


def custom(func, dim, grad=None, hess=None, holomorphic=False):
    """Wrap a user function of chart points (..., n)."""
    return TestFunction(kind="custom", dim=dim, value=func, grad_fn=grad, hess_fn=hess, holomorphic=holomorphic)


def _parse_numbers(key, raw, cast=float):
    try:
        return [cast(item) for item in raw.split(",") if item.strip()]
    except ValueError as e:
        raise SpecValidationError(f"Invalid value for test function key {key}: {raw!r}", e) from e


def parse_psi(text, metric):
    """
    Build a TestFunction from ``name[:key=value;...]``.

    Examples: ``const``, ``fourier_mode:k=1,2``, ``spherical_harmonic:l=1;m=0``,
    ``polynomial:coeffs=0,0,1;axis=1``.

    Args:
        text: Test function spec
        metric: ChartMetric the function lives on

    Returns:
        TestFunction

    Raises:
        SpecValidationError: On unknown names, unknown keys or bad values
    """
    name, _, rest = text.strip().partition(":")
    name = "const" if name == "constant" else name
    if name not in BUILTIN_TEST_FUNCTIONS:
        raise SpecValidationError(f"Unknown test function: {name}")
    options = {}
    for item in filter(None, (part.strip() for part in rest.split(";"))):
        key, sep, raw = item.partition("=")
        key = key.strip()
        if not sep:
            raise SpecValidationError(f"Test function option {item!r} is not key=value")
        if key not in BUILTIN_TEST_FUNCTIONS[name]:
            raise SpecValidationError(f"Unknown test function key for {name}: {key}")
        options[key] = raw.strip()

    if name == "const":
        return constant(_parse_numbers("c", options.get("c", "1"))[0], dim=metric.dim)
    if name == "fourier_mode":
        if "k" not in options:
            raise SpecValidationError("fourier_mode requires key: k")
        k = _parse_numbers("k", options["k"], int)
        if len(k) != metric.dim:
            raise SpecValidationError(f"fourier_mode needs {metric.dim} wave numbers, got {len(k)}")
        return fourier_mode(k)
    if name == "polynomial":
        if "coeffs" not in options:
            raise SpecValidationError("polynomial requires key: coeffs")
        axis = _parse_numbers("axis", options.get("axis", "0"), int)[0]
        return polynomial(_parse_numbers("coeffs", options["coeffs"]), dim=metric.dim, axis=axis)
    if metric.kind != "round_sphere":
        raise SpecValidationError(f"spherical_harmonic lives on round_sphere, not {metric.kind}")
    l_value = _parse_numbers("l", options.get("l", "0"), int)[0]
    m_value = _parse_numbers("m", options.get("m", "0"), int)[0]
    return spherical_harmonic(l_value, m_value, chart=metric.params.get("chart", "spherical"))


@dataclass(frozen=True)
class NormalJets:
    """ψ(q), its gradient and covariant Hessian at q, all in the orthonormal frame."""

    value: complex
    grad: np.ndarray
    hess: np.ndarray

    @property
    def laplacian(self):
        """Δψ(q) = Σ_j ∂²ψ/∂(x^j)² in normal coordinates."""
        return complex(np.trace(self.hess))


def normal_jets(psi, metric, q, gamma=None):
    """
    Derivatives of ψ in normal coordinates at q.

    In normal coordinates the Christoffel symbols vanish at the center, so the
    second derivatives are the frame components of the covariant Hessian
    ∂_j ∂_k ψ − Γ^i_jk ∂_i ψ.

    Args:
        psi: TestFunction
        metric: ChartMetric
        q: Base point
        gamma: Christoffel symbols at q, if already computed

    Returns:
        NormalJets
    """
    q = np.asarray(q, dtype=float)
    if psi.dim != metric.dim:
        raise SpecValidationError(
            f"{psi.describe()} is {psi.dim}-dimensional, the manifold is {metric.dim}-dimensional"
        )
    frame = normal_frame(metric, q).frame
    grad = psi.grad(q, metric)
    hess = psi.hess(q, metric)
    if not metric.is_flat:
        if gamma is None:
            gamma = christoffel(metric, q)
        hess = hess - np.einsum("ijk,i->jk", gamma, grad)
    hess = 0.5 * (hess + hess.T)
    return NormalJets(value=complex(psi(q)), grad=frame.T @ grad, hess=frame.T @ hess @ frame)
