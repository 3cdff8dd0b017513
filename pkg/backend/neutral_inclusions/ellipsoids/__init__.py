"""Confocal ellipsoid kernels and the over-determined shell problem."""

from .potentials import (
    BallPair,
    EllipsoidIntegrals,
    EllipsoidPair,
    OdpEvaluation,
    OdpResidual,
    OdpSolution,
    alpha_coefficients,
    ellipsoid_integrals,
    ellipsoid_kernels,
    ellipsoidal_coordinate,
    odp_residual,
    odp_solution,
    odp_w,
    shell_pair_from_dict,
)

__all__ = [
    "BallPair", "EllipsoidIntegrals", "EllipsoidPair", "OdpEvaluation", "OdpResidual",
    "OdpSolution", "alpha_coefficients", "ellipsoid_kernels", "ellipsoid_integrals", "ellipsoidal_coordinate",
    "odp_residual", "odp_solution", "odp_w", "shell_pair_from_dict",
]
