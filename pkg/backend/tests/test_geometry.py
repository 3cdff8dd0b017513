"""
Tests for exterior conformal maps and discretized boundary curves
"""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from neutral_inclusions.errors import DegenerateCurve, NonInjectiveMap, SpecError
from neutral_inclusions.geometry.conformal import ConformalMap, identity_map, monomial_map
from neutral_inclusions.geometry.curves import (
    BoundaryCurve,
    CircleSpec,
    ConformalSpec,
    EllipseSpec,
    NeumannOvalSpec,
    PerturbedDiskSpec,
    build_curve,
    check_simple,
    curve_area,
    curve_spec_from_dict,
)


def test_circle_nodes_and_invariants(unit_circle):
    """Unit circle: perimeter 2 pi, area pi, curvature 1, outward normals."""
    assert unit_circle.n == 256
    assert_allclose(unit_circle.perimeter, 2.0 * np.pi, rtol=1e-14)
    assert_allclose(curve_area(unit_circle), np.pi, rtol=1e-14)
    assert_allclose(unit_circle.curvature, 1.0, rtol=1e-12)
    assert_allclose(unit_circle.normals, unit_circle.points, atol=1e-14)
    assert_allclose(unit_circle.circumradius, 1.0)


def test_ellipse_area_and_centroid():
    curve = build_curve(EllipseSpec(2.0, 1.0, (0.5, -0.25)), 128)
    assert_allclose(curve_area(curve), 2.0 * np.pi, rtol=1e-12)
    assert_allclose(curve.centroid, [0.5, -0.25], atol=1e-12)


def test_neumann_oval_area():
    spec = NeumannOvalSpec(1.0, 0.5)
    curve = build_curve(spec, 256)
    assert_allclose(curve_area(curve), spec.area, rtol=1e-12)
    assert_allclose(spec.area, np.pi * 1.5)


@pytest.mark.parametrize("n", [15, 17, 8])
def test_build_curve_rejects_bad_node_counts(n):
    with pytest.raises(DegenerateCurve):
        build_curve(CircleSpec(1.0), n)


def test_perturbed_disk_must_stay_positive():
    with pytest.raises(DegenerateCurve):
        build_curve(PerturbedDiskSpec(1.0, cos=(0.0, 1.2)), 64)


def test_conformal_curve_area_matches_enclosed_area(quadratic_tail_map):
    for r in (1.0, math.sqrt(3.0)):
        curve = build_curve(ConformalSpec(quadratic_tail_map, r), 256)
        assert_allclose(curve_area(curve), quadratic_tail_map.enclosed_area(r), rtol=1e-12)


def test_conformal_curve_curvature_of_identity():
    curve = build_curve(ConformalSpec(identity_map(), 2.0), 64)
    assert_allclose(curve.curvature, 0.5, rtol=1e-12)


@pytest.mark.parametrize("coefficients", [(1.0,), (0.0, 0.5)])
def test_non_injective_maps_are_rejected(coefficients):
    with pytest.raises(NonInjectiveMap):
        ConformalMap(coefficients)


def test_map_accepts_pairs_and_drops_trailing_zeros():
    phi = ConformalMap(([0.1, 0.2], 0.0, 0.0))
    assert phi.order == 1
    assert phi.b_D == complex(0.1, 0.2)
    assert ConformalMap.from_dict(phi.to_dict()) == phi


def test_monomial_map():
    phi = monomial_map(3, 0.25)
    assert phi.b_D == 0
    assert_allclose(phi(2.0), 2.0 + 0.25 / 8.0)


def test_normalized_map_has_real_bD():
    phi = ConformalMap((0.1j, 0.05 + 0.02j))
    psi_map, psi = phi.normalized()
    assert_allclose(psi_map.b_D, 0.1, atol=1e-15)
    assert_allclose(psi, np.pi / 4.0)

    zeta = 1.3 * np.exp(1j * np.linspace(0.0, 2.0 * np.pi, 17))
    expected = np.exp(-1j * psi) * phi(np.exp(1j * psi) * zeta)
    assert_allclose(psi_map(zeta), expected, atol=1e-14)


def test_inverse_recovers_exterior_points(quadratic_tail_map):
    zeta = 2.0 * np.exp(1j * np.linspace(0.0, 2.0 * np.pi, 33))
    z = quadratic_tail_map(zeta)
    assert_allclose(quadratic_tail_map.inverse(z), zeta, atol=1e-12)


def test_derivatives_match_finite_differences(cubic_tail_map):
    zeta = np.array([1.5 + 0.2j, -1.1 + 0.9j])
    h = 1e-6
    fd = (cubic_tail_map(zeta + h) - cubic_tail_map(zeta - h)) / (2.0 * h)
    assert_allclose(cubic_tail_map.derivative(zeta), fd, rtol=1e-8)
    fd2 = (cubic_tail_map.derivative(zeta + h) - cubic_tail_map.derivative(zeta - h)) / (2.0 * h)
    assert_allclose(cubic_tail_map.second_derivative(zeta), fd2, rtol=1e-7)


def test_rotated_and_scaled_copies(ellipse_2_1):
    rotated = ellipse_2_1.rotated(0.3)
    assert_allclose(curve_area(rotated), curve_area(ellipse_2_1), rtol=1e-13)
    assert_allclose(np.linalg.norm(rotated.points, axis=1), np.linalg.norm(ellipse_2_1.points, axis=1))

    scaled = ellipse_2_1.scaled(1.5)
    assert_allclose(curve_area(scaled), 2.25 * curve_area(ellipse_2_1), rtol=1e-13)
    assert_allclose(scaled.perimeter, 1.5 * ellipse_2_1.perimeter, rtol=1e-13)
    assert not ellipse_2_1.points.flags.writeable


def test_curve_spec_from_dict():
    spec = curve_spec_from_dict({"kind": "perturbed_disk", "r_i": 1.0, "cos": [0.0, 0.0, 0.05]})
    assert isinstance(spec, PerturbedDiskSpec)
    assert spec.cos == (0.0, 0.0, 0.05)

    spec = curve_spec_from_dict({"kind": "conformal", "coefficients": [[0.0, 0.0], [0.25, 0.0]], "dilation": 2.0})
    assert isinstance(spec, ConformalSpec)
    assert spec.dilation == 2.0

    with pytest.raises(SpecError):
        curve_spec_from_dict({"kind": "triangle"})
    with pytest.raises(SpecError):
        curve_spec_from_dict({"kind": "ellipse", "a": 1.0})


def test_unperturbed_disk_is_the_circle():
    disk = build_curve(PerturbedDiskSpec(1.5), 64)
    circle = build_curve(CircleSpec(1.5), 64)
    for name in ("points", "speed", "normals", "curvature"):
        assert np.array_equal(getattr(disk, name), getattr(circle, name))


def test_curve_quantities_converge_under_refinement():
    spec = PerturbedDiskSpec(1.0, cos=(0.0, 0.1, 0.2), sin=(0.05,))
    coarse, fine = build_curve(spec, 128), build_curve(spec, 256)
    assert_allclose(curve_area(coarse), curve_area(fine), rtol=1e-12)
    assert_allclose(coarse.perimeter, fine.perimeter, rtol=1e-12)
    assert_allclose(coarse.centroid, fine.centroid, atol=1e-12)


def test_crossing_segments_are_rejected():
    """z = e^{it} + 0.7 e^{2it} has an inner loop through (-0.7, 0) but positive signed area."""
    t = 2.0 * np.pi * np.arange(64) / 64
    z = np.exp(1j * t) + 0.7 * np.exp(2j * t)
    dz = 1j * np.exp(1j * t) + 1.4j * np.exp(2j * t)
    tangent = dz / np.abs(dz)
    looped = BoundaryCurve(t, np.column_stack([z.real, z.imag]), np.abs(dz),
                           np.column_stack([tangent.imag, -tangent.real]), np.zeros(64))
    assert curve_area(looped) > 0
    with pytest.raises(DegenerateCurve, match="cross"):
        check_simple(looped)

    check_simple(build_curve(PerturbedDiskSpec(1.0, cos=(0.0, 0.0, 0.3)), 64))
