"""Polarization tensors and Hashin-Shtrikman checks."""

from .profile import ConductivityProfile, contrast_parameter
from .tensors import (
    HsReport,
    PolarizationTensor,
    hs_check,
    pt_coreshell,
    pt_simple,
    solve_coreshell_densities,
    solve_simple_densities,
)

__all__ = [
    "ConductivityProfile", "HsReport", "PolarizationTensor", "contrast_parameter",
    "hs_check", "pt_coreshell", "pt_simple", "solve_coreshell_densities",
    "solve_simple_densities",
]
