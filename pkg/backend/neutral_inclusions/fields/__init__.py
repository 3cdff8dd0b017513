"""Field evaluation, far-field diagnostics and the imperfect-interface solver."""

from .exterior import (
    CoreShellInclusion,
    DecayEstimate,
    FieldGrid,
    FieldSolution,
    FieldValues,
    SimpleInclusion,
    decay_exponent,
    exterior_field,
    fit_dipole_tensor,
    grid_sample,
    solve_field,
    write_grid_csv,
)
from .spectral import (
    FarFieldCoefficients,
    ImperfectInclusion,
    SpectralExteriorSolution,
    far_field_coefficients,
    imperfect_field,
    solve_imperfect_exterior,
)

__all__ = [
    "CoreShellInclusion", "DecayEstimate", "FarFieldCoefficients", "FieldGrid", "FieldSolution",
    "FieldValues", "ImperfectInclusion", "SimpleInclusion", "SpectralExteriorSolution", "decay_exponent",
    "exterior_field", "far_field_coefficients", "fit_dipole_tensor", "grid_sample",
    "imperfect_field", "solve_field", "solve_imperfect_exterior", "write_grid_csv",
]
