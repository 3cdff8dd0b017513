"""Newtonian potentials and quadrature identities."""

from .domains import (
    HarmonicTestFunction,
    NewtonianFormulationReport,
    QuadratureReport,
    check_newtonian_formulation,
    ellipsoid_potential_3d,
    focal_ellipse_identity,
    harmonic_catalog,
    mean_value_identity,
    neumann_oval_identity,
    newtonian_potential_2d,
)

__all__ = [
    "HarmonicTestFunction", "NewtonianFormulationReport", "QuadratureReport",
    "check_newtonian_formulation", "ellipsoid_potential_3d", "focal_ellipse_identity",
    "harmonic_catalog", "mean_value_identity", "neumann_oval_identity", "newtonian_potential_2d",
]
