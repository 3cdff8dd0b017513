import os
import sys

import pytest

# Ensure backend modules are importable when running from project root or tests
TESTS_DIR = os.path.dirname(os.path.abspath(__file__))
BACKEND_DIR = os.path.dirname(TESTS_DIR)
if BACKEND_DIR not in sys.path:
    sys.path.insert(0, BACKEND_DIR)

from neutral_inclusions.geometry.conformal import ConformalMap
from neutral_inclusions.geometry.curves import CircleSpec, EllipseSpec, PerturbedDiskSpec, build_curve


@pytest.fixture
def unit_circle():
    return build_curve(CircleSpec(1.0), 256)


@pytest.fixture
def ellipse_2_1():
    return build_curve(EllipseSpec(2.0, 1.0), 256)


@pytest.fixture
def kite():
    """Non-elliptic smooth curve r = 1 + 0.3 cos 3theta."""
    return build_curve(PerturbedDiskSpec(1.0, cos=(0.0, 0.0, 0.3)), 256)


@pytest.fixture
def quadratic_tail_map():
    """Phi = zeta + 1/(4 zeta^2), b_D = 0."""
    return ConformalMap((0.0, 0.25))


@pytest.fixture
def cubic_tail_map():
    """Phi = zeta + 1/(4 zeta^3), b_D = 0."""
    return ConformalMap((0.0, 0.0, 0.25))
