"""
Exterior problem for a perfectly conducting inclusion with an imperfect interface.

In the zeta-plane the exterior potential is

    V = Re(alpha Phi(zeta) + sum_{n>=1} c_n zeta^{-n}),   alpha = a_1 - i a_2,

the core sits at the constant potential lambda, and the interface condition
beta (u+ - u-) = d_nu u+ pulls back to

    beta~(theta) (V - lambda) = d_r V   on |zeta| = 1,

with beta~ = beta |Phi'|. Writing c_n = x_n + i y_n this reads

    sum_n (beta~ + n)(x_n cos n theta + y_n sin n theta) - beta~ lambda = G - beta~ V0,

V0 = Re(alpha Phi(e^{i theta})), G = Re(alpha e^{i theta} Phi'(e^{i theta})),
which is projected onto 1, cos m theta, sin m theta (m <= N_modes).
The far-field coefficient is alpha_1 = c_1.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from ..config import CONDITION_WARNING, DEFAULT_MODES, DEFAULT_NODES
from ..errors import IllConditioned, InvalidInputError, SolveFailure
from ..geometry.conformal import ConformalMap
from ..geometry.curves import ConformalSpec, build_curve
from ..neutrality.bonding import BondingParameter
from .exterior import FieldSolution

logger = logging.getLogger(__name__)

MIN_MODES = 32


@dataclass(frozen=True)
class ImperfectInclusion:
    """Perfectly conducting core bounded by Phi(|zeta| = 1) with bonding parameter beta."""

    conformal_map: ConformalMap
    beta: BondingParameter
    n_modes: int = DEFAULT_MODES


def _alpha_from_direction(a) -> complex:
    a = np.asarray(a, dtype=float)
    return complex(a[0], -a[1])


@dataclass(frozen=True)
class SpectralExteriorSolution:
    conformal_map: ConformalMap
    alpha: complex
    coefficients: np.ndarray
    lambda_core: float
    condition: float
    interface_residual: float

    @property
    def n_modes(self) -> int:
        return self.coefficients.size

    @property
    def alpha_1(self) -> complex:
        return complex(self.coefficients[0])

    @property
    def tail_ratio(self) -> Optional[float]:
        """Geometric decay rate q of |c_n| fitted over the resolved coefficients."""
        magnitudes = np.abs(self.coefficients)
        scale = max(float(np.max(magnitudes)), 1e-300)
        resolved = np.flatnonzero(magnitudes > 1e-13 * scale)
        if resolved.size < 2:
            return None
        slope = np.polyfit(resolved + 1.0, np.log(magnitudes[resolved]), 1)[0]
        return float(np.exp(slope))

    def perturbation(self, points) -> np.ndarray:
        """u - a.x = Re sum c_n zeta^{-n} at exterior points z = Phi(zeta)."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        zeta = self.conformal_map.inverse(points[:, 0] + 1j * points[:, 1])
        inverse = 1.0 / zeta
        total = np.zeros(zeta.shape, dtype=complex)
        for c_n in self.coefficients[::-1]:
            total = total * inverse + c_n
        return (total * inverse).real

    def to_dict(self) -> Dict:
        return {
            "alpha": [self.alpha.real, self.alpha.imag],
            "alpha_1": [self.alpha_1.real, self.alpha_1.imag],
            "abs_alpha_1": abs(self.alpha_1),
            "lambda_core": self.lambda_core,
            "n_modes": self.n_modes,
            "condition": self.condition,
            "interface_residual": self.interface_residual,
            "tail_ratio": self.tail_ratio,
        }


def _interface_residual(conformal_map: ConformalMap, beta: BondingParameter, alpha: complex,
                        coefficients: np.ndarray, lambda_core: float, n_check: int) -> float:
    """max |beta~ (V - lambda) - d_r V| / max |G| on a grid offset from the quadrature nodes."""
    theta = 2.0 * np.pi * (np.arange(n_check) + 0.5) / n_check
    zeta = np.exp(1j * theta)
    modes = np.arange(1, coefficients.size + 1)
    waves = np.exp(-1j * np.outer(theta, modes))
    g = np.real(alpha * zeta * conformal_map.derivative(zeta))
    v = np.real(alpha * conformal_map(zeta)) + np.real(waves @ coefficients)
    dr_v = g - np.real(waves @ (modes * coefficients))
    mismatch = beta.scaled_at(theta) * (v - lambda_core) - dr_v
    return float(np.max(np.abs(mismatch)) / max(float(np.max(np.abs(g))), 1e-300))


def solve_imperfect_exterior(conformal_map: ConformalMap, beta: BondingParameter, a,
                             n_modes: int = DEFAULT_MODES) -> SpectralExteriorSolution:
    """Galerkin solve for the Laurent coefficients c_1..c_N and the core potential."""
    if n_modes < MIN_MODES:
        raise InvalidInputError(f"spectral solver needs at least {MIN_MODES} modes, got {n_modes}")
    alpha = _alpha_from_direction(a)
    if alpha == 0:
        raise InvalidInputError("background field must be nonzero")

    n_quad = max(4 * n_modes, 4 * (conformal_map.order + n_modes) + 8)
    theta = 2.0 * np.pi * np.arange(n_quad) / n_quad
    zeta = np.exp(1j * theta)
    weight = beta.scaled_at(theta)

    v0 = np.real(alpha * conformal_map(zeta))
    g = np.real(alpha * zeta * conformal_map.derivative(zeta))

    modes = np.arange(1, n_modes + 1)
    cos = np.cos(np.outer(theta, modes))
    sin = np.sin(np.outer(theta, modes))
    factor = weight[:, None] + modes[None, :]
    # columns: x_1..x_N, y_1..y_N, lambda
    trial = np.hstack([factor * cos, factor * sin, -weight[:, None]])
    test = np.hstack([np.ones((n_quad, 1)), cos, sin])

    matrix = test.T @ trial / n_quad
    rhs = test.T @ (g - weight * v0) / n_quad

    condition = float(np.linalg.cond(matrix))
    if not np.isfinite(condition) or condition > CONDITION_WARNING:
        raise IllConditioned(f"Galerkin matrix condition {condition:.3e} exceeds {CONDITION_WARNING:.0e}")
    try:
        solution = np.linalg.solve(matrix, rhs)
    except np.linalg.LinAlgError as e:
        raise SolveFailure("Galerkin matrix is singular") from e

    coefficients = solution[:n_modes] + 1j * solution[n_modes:2 * n_modes]
    lambda_core = float(solution[-1])
    residual = _interface_residual(conformal_map, beta, alpha, coefficients, lambda_core, 2 * n_quad)

    result = SpectralExteriorSolution(conformal_map, alpha, coefficients, lambda_core, condition, residual)
    logger.info(f"spectral solve: N_modes={n_modes}, alpha={alpha}, |alpha_1|={abs(result.alpha_1):.3e}, "
                f"cond={condition:.3e}, interface residual={residual:.3e}")
    return result


@dataclass(frozen=True)
class FarFieldCoefficients:
    alpha_one: complex
    alpha_i: complex

    @property
    def max_abs(self) -> float:
        return max(abs(self.alpha_one), abs(self.alpha_i))

    def to_dict(self) -> Dict:
        return {
            "alpha_1_for_alpha_1": [self.alpha_one.real, self.alpha_one.imag],
            "alpha_1_for_alpha_i": [self.alpha_i.real, self.alpha_i.imag],
            "max_abs_alpha_1": self.max_abs,
        }


def far_field_coefficients(conformal_map: ConformalMap, beta: BondingParameter,
                           n_modes: int = DEFAULT_MODES) -> FarFieldCoefficients:
    """alpha_1 for the background fields alpha = 1 (a = e1) and alpha = i (a = -e2)."""
    one = solve_imperfect_exterior(conformal_map, beta, (1.0, 0.0), n_modes).alpha_1
    i = solve_imperfect_exterior(conformal_map, beta, (0.0, -1.0), n_modes).alpha_1
    return FarFieldCoefficients(one, i)


def imperfect_field(conformal_map: ConformalMap, beta: BondingParameter, a,
                    n_modes: int = DEFAULT_MODES, n_nodes: int = DEFAULT_NODES) -> FieldSolution:
    """Wrap a spectral solution so decay and grid sampling treat it like any other field."""
    spectral = solve_imperfect_exterior(conformal_map, beta, a, n_modes)
    curve = build_curve(ConformalSpec(conformal_map, 1.0), n_nodes)
    return FieldSolution(np.asarray(a, dtype=float), "imperfect", (curve,), spectral=spectral,
                         metadata={"spectral": spectral.to_dict(), "bonding": beta.to_dict()})
