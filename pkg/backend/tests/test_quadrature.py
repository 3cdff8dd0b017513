"""
Tests for Newtonian potentials and quadrature identities
"""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from neutral_inclusions.errors import DegenerateFoci, InvalidInputError
from neutral_inclusions.geometry.curves import CircleSpec, EllipseSpec, build_curve
from neutral_inclusions.quadrature import (
    HarmonicTestFunction,
    check_newtonian_formulation,
    ellipsoid_potential_3d,
    focal_ellipse_identity,
    harmonic_catalog,
    mean_value_identity,
    neumann_oval_identity,
    newtonian_potential_2d,
)


def test_newtonian_potential_of_unit_disk(unit_circle):
    """N = log|x|/(2 pi) outside and (|x|^2 - 1)/(4 pi) inside."""
    theta = np.linspace(0.0, 2.0 * np.pi, 9, endpoint=False)
    outside = 2.5 * np.column_stack([np.cos(theta), np.sin(theta)])
    inside = 0.3 * np.column_stack([np.cos(theta), np.sin(theta)])
    assert_allclose(newtonian_potential_2d(unit_circle, outside), np.log(2.5) / (2.0 * np.pi), atol=1e-12)
    assert_allclose(newtonian_potential_2d(unit_circle, inside), (0.09 - 1.0) / (4.0 * np.pi), atol=1e-12)
    assert_allclose(newtonian_potential_2d(unit_circle, [[0.0, 0.0]]), -1.0 / (4.0 * np.pi), atol=1e-12)


def test_newtonian_potential_of_unit_ball():
    points = np.array([[0.0, 0.0, 0.0], [0.3, -0.2, 0.1], [2.0, 0.0, 0.0], [1.0, 2.0, -2.0]])
    r = np.linalg.norm(points, axis=1)
    volume = 4.0 * np.pi / 3.0
    expected = np.where(r <= 1.0, -(3.0 - r ** 2) / 6.0 / volume, -1.0 / (4.0 * np.pi * np.maximum(r, 1e-300)))
    assert_allclose(ellipsoid_potential_3d((1.0, 1.0, 1.0), points), expected, rtol=1e-12)


def test_newtonian_formulation_of_confocal_shell():
    report = check_newtonian_formulation((4.0, 2.0, 1.0), 2.0)
    assert report.outside_max <= 1e-6
    assert report.inside_fit_residual <= 1e-6
    assert report.linear_term_norm <= 1e-7
    assert report.cross_term_norm <= 1e-6
    assert_allclose(report.fitted_alpha, report.alpha, atol=1e-6)


def test_newtonian_formulation_fails_for_non_confocal_shell():
    report = check_newtonian_formulation((4.0, 2.0, 1.0), 2.0, shell_axes=(3.0, 2.0, 1.5))
    assert report.outside_max >= 1e-4
    with pytest.raises(InvalidInputError):
        check_newtonian_formulation((4.0, 2.0, 1.0), 2.0, shell_axes=(1.5, 2.0, 1.5))


@pytest.mark.parametrize("axes, mass", [((2.0, 1.0), 2.0 * math.pi), ((3.0, 2.0, 1.0), 8.0 * math.pi)])
def test_focal_identity(axes, mass):
    report = focal_ellipse_identity(axes)
    assert report.residual <= 1e-8
    constant = report.residuals[0]
    assert constant["test"].endswith("^0")
    assert_allclose(constant["lhs"], mass, rtol=1e-10)
    assert_allclose(constant["rhs"], mass, rtol=1e-10)


def test_focal_identity_coefficient_without_depth_factor_fails():
    report = focal_ellipse_identity((4.0, 2.0))
    assert report.residual <= 1e-8
    assert report.parameters["printed_residual"] >= 1e-3
    assert_allclose(report.parameters["coefficient"], 2.0 * report.parameters["printed_coefficient"])


def test_focal_identity_rejects_degenerate_axes():
    with pytest.raises(DegenerateFoci):
        focal_ellipse_identity((2.0, 2.0))
    with pytest.raises(DegenerateFoci):
        focal_ellipse_identity((3.0, 1.0, 1.0))
    with pytest.raises(InvalidInputError):
        focal_ellipse_identity((1.0, 2.0))


def test_neumann_oval_two_point_rule():
    report = neumann_oval_identity(1.0, 0.5)
    assert_allclose(report.parameters["p"], 0.5, atol=1e-10)
    assert_allclose(report.parameters["area"], 1.5 * np.pi, rtol=1e-12)
    assert report.residual <= 1e-8
    with pytest.raises(InvalidInputError):
        neumann_oval_identity(1.0, 0.0)


def test_mean_value_holds_for_confocal_ellipses():
    inner = build_curve(EllipseSpec(2.0, 1.0), 256)
    outer = build_curve(EllipseSpec(math.sqrt(5.0), math.sqrt(2.0)), 256)
    report = mean_value_identity(inner, outer)
    assert report.residual <= 1e-10
    assert len(report.residuals) == 13


def test_mean_value_fails_for_eccentric_disks(unit_circle):
    inner = build_curve(CircleSpec(0.5, (0.3, 0.0)), 256)
    report = mean_value_identity(inner, unit_circle)
    assert report.residual >= 1e-3


def test_mean_value_holds_for_confocal_ellipsoids():
    inner = (2.0, math.sqrt(2.0), 1.0)
    outer = (math.sqrt(6.0), 2.0, math.sqrt(3.0))
    assert mean_value_identity(inner, outer).residual <= 1e-10
    assert mean_value_identity(inner, (2.5, 2.0, 1.8)).residual >= 1e-4


def test_mean_value_rejects_mixed_regions(unit_circle):
    with pytest.raises(InvalidInputError):
        mean_value_identity(unit_circle, (2.0, 2.0, 2.0))


def test_harmonic_catalog():
    assert len(harmonic_catalog(2)) == 13
    assert all(u.dimension == 3 for u in harmonic_catalog(3, 2))
    with pytest.raises(InvalidInputError):
        harmonic_catalog(2, 7)
    with pytest.raises(InvalidInputError):
        harmonic_catalog(4, 2)

    u = HarmonicTestFunction(3, "lift_im", 3, (0, 1, 2))
    assert u.label == "x3*Im(x1+ix2)^2"
    assert_allclose(u([[1.0, 2.0, 3.0]]), [3.0 * 4.0])
