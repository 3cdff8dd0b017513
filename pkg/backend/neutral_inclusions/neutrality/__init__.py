"""Neutrality conditions, coating constructions and bonding parameters."""

from .bonding import BondingParameter, beta_weakly_neutral, refine_weakly_neutral_beta
from .coatings import (
    CoatingResult,
    CoatingSearchResult,
    construct_coating_bD0,
    find_coating_perturbed_disk,
)
from .conditions import (
    ConfocalConductivity,
    LcDiskSolution,
    beta_disk,
    confocal_matrix_conductivity,
    neutral_matrix_conductivity,
    neutral_volume_fraction,
    solve_lc_disk,
)

__all__ = [
    "BondingParameter", "CoatingResult", "CoatingSearchResult", "ConfocalConductivity",
    "LcDiskSolution", "beta_disk", "beta_weakly_neutral", "confocal_matrix_conductivity",
    "construct_coating_bD0", "find_coating_perturbed_disk", "neutral_matrix_conductivity",
    "neutral_volume_fraction", "refine_weakly_neutral_beta", "solve_lc_disk",
]
