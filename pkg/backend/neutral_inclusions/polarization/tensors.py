"""
Polarization tensors of simple and core-shell inclusions.

Densities solve the transmission integral equations in scaled form:

    simple:      (I - p K*) phi = p nu,                      p = 1/lambda
    core-shell:  (-I + p K*_D) phi1 + p dS_Omega phi2 = -p nu^D
                 q dS_D phi1 + (-I + q K*_Omega) phi2 = -q nu^Omega,  q = 1/mu

and m_ll' = int x_l' phi^(l) summed over all boundaries. The scaled form stays
regular when sigma_c = sigma_s or sigma_s = sigma_m. For a perfectly conducting
core (p = 2) the core block is singular on constants; the averaging term
1 w^T / |dD| pins the mean-zero solution.
"""

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.linalg import LinAlgWarning, get_lapack_funcs, lu_factor, lu_solve

from ..config import ATTAINMENT_TOL, CONDITION_WARNING, MEAN_ZERO_TOL
from ..errors import InvalidInputError, NotDefinite, SingularContrast, SolveFailure
from ..geometry.curves import BoundaryCurve, curve_area
from ..layer_potentials.operators import dnS_cross_matrix, np_matrix, winding_number
from .profile import ConductivityProfile, format_conductivity, inverse_contrast

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PolarizationTensor:
    matrix: np.ndarray
    core_area: float
    shell_area: Optional[float] = None
    contrast: Optional[float] = None
    singular_contrast: bool = False
    dimension: int = 2
    metadata: Dict = field(default_factory=dict)

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix))

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.matrix))

    @property
    def asymmetry(self) -> float:
        return float(np.linalg.norm(self.matrix - self.matrix.T))

    def to_dict(self) -> Dict:
        data = {
            "matrix": self.matrix.tolist(),
            "dimension": self.dimension,
            "core_area": self.core_area,
            "shell_area": self.shell_area,
            "contrast": None if self.contrast is None else format_conductivity(self.contrast),
            "singular_contrast": self.singular_contrast,
        }
        data.update(self.metadata)
        return data


def dense_solve(matrix: np.ndarray, rhs: np.ndarray, label: str) -> np.ndarray:
    """LU with partial pivoting plus a 1-norm condition estimate."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(matrix)
    if np.any(np.diag(lu) == 0) or not np.all(np.isfinite(lu)):
        raise SolveFailure(f"{label}: matrix is numerically singular")

    gecon, = get_lapack_funcs(("gecon",), (lu,))
    rcond, info = gecon(lu, np.linalg.norm(matrix, 1), norm="1")
    if info == 0 and rcond * CONDITION_WARNING < 1.0:
        logger.warning(f"{label}: condition estimate {1.0 / max(rcond, 1e-300):.3e} exceeds {CONDITION_WARNING:.0e}")

    solution = lu_solve((lu, piv), rhs)
    if not np.all(np.isfinite(solution)):
        raise SolveFailure(f"{label}: solve produced non-finite values")
    return solution


def _check_mean_zero(curve: BoundaryCurve, densities: np.ndarray, label: str) -> None:
    totals = densities @ curve.weights
    scale = curve.perimeter * max(float(np.max(np.abs(densities))), 1e-300)
    drift = float(np.max(np.abs(totals))) / scale
    if drift > MEAN_ZERO_TOL:
        logger.warning(f"{label}: densities drift from mean zero by {drift:.3e} (discretization error)")


def _averaging(curve: BoundaryCurve) -> np.ndarray:
    return np.outer(np.ones(curve.n), curve.weights) / curve.perimeter


def solve_simple_densities(curve: BoundaryCurve, k: float) -> np.ndarray:
    """Densities phi^(1), phi^(2) for a simple inclusion, shape (2, N)."""
    if not k > 0:
        raise InvalidInputError(f"contrast must be positive, got {k}")
    if k == 1:
        return np.zeros((2, curve.n))

    p = inverse_contrast(k, 1.0)
    system = np.eye(curve.n) - p * np_matrix(curve).matrix
    if math.isinf(k):
        system += _averaging(curve)
    densities = dense_solve(system, p * curve.normals, "simple inclusion").T
    _check_mean_zero(curve, densities, "simple inclusion")
    return densities


def _check_nested(core: BoundaryCurve, shell: BoundaryCurve) -> None:
    inside = winding_number(shell, core.points)
    if np.any(inside < 0.5):
        raise InvalidInputError("core curve is not contained in the shell curve")


def solve_coreshell_densities(core: BoundaryCurve, shell: BoundaryCurve,
                              profile: ConductivityProfile) -> Tuple[np.ndarray, np.ndarray]:
    """Densities on the core and shell boundaries, each of shape (2, N)."""
    sigma_m = profile.matrix_conductivity
    p = profile.core_factor
    q = inverse_contrast(profile.sigma_s, sigma_m)

    dS_shell_on_core = dnS_cross_matrix(shell, core).matrix
    dS_core_on_shell = dnS_cross_matrix(core, shell).matrix
    _check_nested(core, shell)

    n_d, n_o = core.n, shell.n
    top_left = -np.eye(n_d) + p * np_matrix(core).matrix
    if math.isinf(profile.sigma_c):
        top_left -= _averaging(core)
    system = np.block([
        [top_left, p * dS_shell_on_core],
        [q * dS_core_on_shell, -np.eye(n_o) + q * np_matrix(shell).matrix],
    ])
    rhs = np.vstack([-p * core.normals, -q * shell.normals])

    solution = dense_solve(system, rhs, "core-shell inclusion")
    phi_core, phi_shell = solution[:n_d].T, solution[n_d:].T
    _check_mean_zero(core, phi_core, "core density")
    _check_mean_zero(shell, phi_shell, "shell density")
    return phi_core, phi_shell


def _moments(curve: BoundaryCurve, densities: np.ndarray) -> np.ndarray:
    return densities @ (curve.weights[:, None] * curve.points)


def pt_simple(curve: BoundaryCurve, k: float) -> PolarizationTensor:
    """Polarization tensor of a simple inclusion with contrast k = sigma_c/sigma_m."""
    area = curve_area(curve)
    if k == 1:
        logger.info("Contrast k = 1: returning the zero tensor without solving")
        return PolarizationTensor(np.zeros((2, 2)), area, contrast=1.0, singular_contrast=True)

    matrix = _moments(curve, solve_simple_densities(curve, k))
    logger.info(f"pt_simple: N={curve.n}, k={k}, trace={np.trace(matrix):.10g}")
    return PolarizationTensor(matrix, area, contrast=float(k))


def pt_coreshell(core: BoundaryCurve, shell: BoundaryCurve, profile: ConductivityProfile) -> PolarizationTensor:
    """Polarization tensor of a coated inclusion."""
    phi_core, phi_shell = solve_coreshell_densities(core, shell, profile)
    matrix = _moments(core, phi_core) + _moments(shell, phi_shell)
    shell_area = curve_area(shell)
    logger.info(f"pt_coreshell: N=({core.n}, {shell.n}), |M|/|Omega|={np.linalg.norm(matrix) / shell_area:.3e}")
    return PolarizationTensor(matrix, curve_area(core), shell_area=shell_area,
                              metadata={"profile": profile.to_dict()})


@dataclass(frozen=True)
class HsReport:
    upper_slack: float
    lower_slack: float
    attains_lower: bool

    def to_dict(self) -> Dict:
        return {
            "upper_slack": format_conductivity(self.upper_slack),
            "lower_slack": self.lower_slack,
            "attains_lower": self.attains_lower,
        }


def hs_check(tensor: PolarizationTensor, k: float, area: float, dimension: int = 2) -> HsReport:
    """
    Slacks of the Hashin-Shtrikman trace bounds.

    Both slacks are multiplied by sign(k - 1) so that nonnegativity is the
    bound for every contrast; for k > 1 they equal the classical forms.
    """
    if k == 1:
        raise SingularContrast("Hashin-Shtrikman bounds need k != 1")
    matrix = 0.5 * (tensor.matrix + tensor.matrix.T)
    eigenvalues = np.linalg.eigvalsh(matrix)
    sign = 1.0 if k > 1 else -1.0
    if np.any(sign * eigenvalues <= 0):
        raise NotDefinite(
            f"tensor eigenvalues {eigenvalues.tolist()} are not all of sign {sign:+.0f} (sign of k - 1)"
        )

    d = dimension
    inverse_trace = float(np.trace(np.linalg.inv(matrix)))
    if math.isinf(k):
        upper_slack = math.inf
        lower_bound = 1.0
    else:
        upper_slack = sign * (area * (k - 1.0) * (d - 1.0 + 1.0 / k) - float(np.trace(matrix)))
        lower_bound = (d - 1.0 + k) / (k - 1.0)
    lower_slack = sign * (lower_bound - area * inverse_trace)
    return HsReport(upper_slack, lower_slack, lower_slack <= ATTAINMENT_TOL)
