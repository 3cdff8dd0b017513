"""Curve construction and discretization."""

from .conformal import ConformalMap, identity_map, monomial_map
from .curves import (
    BoundaryCurve,
    CircleSpec,
    ConformalSpec,
    CurveSpec,
    EllipseSpec,
    NeumannOvalSpec,
    PerturbedDiskSpec,
    build_curve,
    curve_area,
    curve_spec_from_dict,
)

__all__ = [
    "BoundaryCurve", "CircleSpec", "ConformalMap", "ConformalSpec", "CurveSpec",
    "EllipseSpec", "NeumannOvalSpec", "PerturbedDiskSpec", "build_curve",
    "curve_area", "curve_spec_from_dict", "identity_map", "monomial_map",
]
