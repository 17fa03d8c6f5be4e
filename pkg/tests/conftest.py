"""
Shared fixtures for the wickflow test suite.

Library tests import ``python.lib...`` through ``pythonpath = .``; the
command-line tests import ``app`` directly, so ``python/`` is put on the path
as well.
"""

import math
import sys
from pathlib import Path

import pytest

PYTHON_DIR = Path(__file__).resolve().parent.parent / "python"
sys.path.insert(0, str(PYTHON_DIR))

from python.lib.geometry import (  # noqa: E402
    circle,
    flat_torus,
    hyperbolic_halfplane,
    round_sphere,
    surface_of_revolution,
)

REVOLUTION_PROFILE = [1.0, 0.2, 0.1]


@pytest.fixture
def manifold_dir():
    """Directory of the ready-made manifold spec files."""
    return PYTHON_DIR / "config" / "manifolds"


@pytest.fixture
def sphere():
    return round_sphere(1.0)


@pytest.fixture
def torus():
    return flat_torus(2)


@pytest.fixture
def s1():
    return circle()


@pytest.fixture
def hyperbolic():
    return hyperbolic_halfplane()


@pytest.fixture
def revolution():
    return surface_of_revolution(REVOLUTION_PROFILE)


@pytest.fixture
def equator_geodesic():
    """A unit-speed great circle along the equator of the unit sphere, as (x, p)."""
    return [math.pi / 2, 0.0], [0.0, 1.0]
