"""
Coatings that make a core weakly neutral.

Two constructions:
  - a perfectly conducting core with b_D = 0 coated by the image of |zeta| = r
    under its own exterior map, where r^2 = (1 + sigma_s)/(1 - sigma_s);
  - a perturbed disk coated by a shell r_e + b0 + b1 cos 2theta + b2 sin 2theta,
    with b found by damped Newton iteration on the polarization tensor entries.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from ..config import DEFAULT_NODES, DEFAULT_TOL, NEWTON_FD_STEP, NEWTON_MAX_HALVINGS, NEWTON_MAX_ITER
from ..errors import BDNotZero, InvalidInputError, NoConvergence, ShellTooConductive, SingularSystem
from ..geometry.conformal import ConformalMap
from ..geometry.curves import BoundaryCurve, ConformalSpec, PerturbedDiskSpec, build_curve, curve_area
from ..polarization.profile import ConductivityProfile
from ..polarization.tensors import pt_coreshell
from .conditions import neutral_volume_fraction

logger = logging.getLogger(__name__)

BD_ZERO_TOL = 1e-12


@dataclass(frozen=True)
class CoatingResult:
    """Perfectly conducting core Phi(|zeta| = 1) coated by Phi(|zeta| = r) in a unit matrix."""

    conformal_map: ConformalMap
    r: float
    sigma_s: float
    sigma_m: float = 1.0
    sigma_c: float = math.inf

    @property
    def core_spec(self) -> ConformalSpec:
        return ConformalSpec(self.conformal_map, 1.0)

    @property
    def shell_spec(self) -> ConformalSpec:
        return ConformalSpec(self.conformal_map, self.r)

    @property
    def volume_fraction(self) -> float:
        return 1.0 / (self.r * self.r)

    @property
    def profile(self) -> ConductivityProfile:
        return ConductivityProfile(self.sigma_c, self.sigma_s, self.sigma_m)

    def curves(self, n: int = DEFAULT_NODES) -> Tuple[BoundaryCurve, BoundaryCurve]:
        return build_curve(self.core_spec, n), build_curve(self.shell_spec, n)

    def to_dict(self) -> Dict:
        return {
            "r": self.r,
            "volume_fraction": self.volume_fraction,
            "profile": self.profile.to_dict(),
            "core": self.core_spec.to_dict(),
            "shell": self.shell_spec.to_dict(),
        }


def construct_coating_bD0(conformal_map: ConformalMap, sigma_s: float) -> CoatingResult:
    """Coating of a perfectly conducting core whose exterior map has b_D = 0."""
    if abs(conformal_map.b_D) > BD_ZERO_TOL:
        raise BDNotZero(f"|b_D| = {abs(conformal_map.b_D):.3e} exceeds {BD_ZERO_TOL:.0e}")
    sigma_s = float(sigma_s)
    if not sigma_s > 0:
        raise InvalidInputError(f"sigma_s must be positive, got {sigma_s}")
    if sigma_s >= 1.0:
        raise ShellTooConductive(f"sigma_s = {sigma_s} >= sigma_m = 1: no coating radius r > 1 exists")

    r = math.sqrt((1.0 + sigma_s) / (1.0 - sigma_s))
    logger.info(f"b_D = 0 coating: sigma_s = {sigma_s}, r = {r:.12g}")
    return CoatingResult(conformal_map, r, sigma_s)


@dataclass(frozen=True)
class CoatingSearchResult:
    b: Tuple[float, float, float]
    r_e: float
    volume_fraction: float
    iterations: int
    residual: float
    shell_spec: PerturbedDiskSpec
    trace: List[Dict] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {
            "b": list(self.b),
            "r_e": self.r_e,
            "volume_fraction": self.volume_fraction,
            "iterations": self.iterations,
            "residual": self.residual,
            "shell": self.shell_spec.to_dict(),
            "trace": self.trace,
        }


def coating_shell(r_e: float, b) -> PerturbedDiskSpec:
    """Shell r_e + b0 + b1 cos 2theta + b2 sin 2theta."""
    b0, b1, b2 = (float(v) for v in b)
    return PerturbedDiskSpec(r_e, mean=b0, cos=(0.0, b1), sin=(0.0, b2))


def find_coating_perturbed_disk(core: PerturbedDiskSpec, sigma_c: float, sigma_s: float,
                                sigma_m: float = 1.0, n_nodes: int = DEFAULT_NODES,
                                tol: float = DEFAULT_TOL,
                                max_iter: int = NEWTON_MAX_ITER) -> CoatingSearchResult:
    """
    Find b so that the coated perturbed disk has a vanishing polarization tensor.

    The unperturbed radii are neutral: r_e = r_i / sqrt(f) with f from the
    concentric-disk condition. The residual vector is (m11, m22, m12) and the
    Jacobian is a forward difference with step NEWTON_FD_STEP * r_e.

    Args:
        core: perturbed disk r_i + h(theta)
        sigma_c, sigma_s, sigma_m: conductivities of core, shell and matrix
        n_nodes: nodes per curve
        tol: converged when ||M||_F <= tol * |Omega|
        max_iter: Newton steps allowed

    Returns:
        CoatingSearchResult with the iteration trace
    """
    profile = ConductivityProfile(sigma_c, sigma_s, sigma_m)
    f = neutral_volume_fraction(sigma_c, sigma_s, profile.matrix_conductivity, 2)
    r_e = core.r_i / math.sqrt(f)
    core_curve = build_curve(core, n_nodes)

    def evaluate(b: np.ndarray) -> Tuple[np.ndarray, float]:
        shell_curve = build_curve(coating_shell(r_e, b), n_nodes)
        m = pt_coreshell(core_curve, shell_curve, profile).matrix
        return np.array([m[0, 0], m[1, 1], 0.5 * (m[0, 1] + m[1, 0])]), curve_area(shell_curve)

    b = np.zeros(3)
    residual, area = evaluate(b)
    norm = float(np.sqrt(residual[0] ** 2 + residual[1] ** 2 + 2.0 * residual[2] ** 2))
    trace = [{"iteration": 0, "b": b.tolist(), "residual": norm / area, "damping": None}]
    logger.info(f"coating search: r_e = {r_e:.12g}, f = {f:.12g}, initial |M|/|Omega| = {norm / area:.3e}")

    delta = NEWTON_FD_STEP * r_e
    iteration = 0
    while norm > tol * area:
        if iteration >= max_iter:
            raise NoConvergence(
                f"coating search did not reach |M| <= {tol:g}|Omega| in {max_iter} steps "
                f"(last |M|/|Omega| = {norm / area:.3e}); the perturbation may be too large"
            )
        iteration += 1

        jacobian = np.empty((3, 3))
        for k in range(3):
            shifted = b.copy()
            shifted[k] += delta
            jacobian[:, k] = (evaluate(shifted)[0] - residual) / delta
        try:
            step = -np.linalg.solve(jacobian, residual)
        except np.linalg.LinAlgError as e:
            raise SingularSystem(f"coating Jacobian is singular at b = {b.tolist()}") from e

        damping = 1.0
        for _ in range(NEWTON_MAX_HALVINGS + 1):
            trial = b + damping * step
            trial_residual, trial_area = evaluate(trial)
            trial_norm = float(np.sqrt(trial_residual[0] ** 2 + trial_residual[1] ** 2
                                       + 2.0 * trial_residual[2] ** 2))
            if trial_norm < norm:
                break
            damping *= 0.5
        else:
            raise NoConvergence(f"line search failed at step {iteration}, |M|/|Omega| = {norm / area:.3e}")

        b, residual, norm, area = trial, trial_residual, trial_norm, trial_area
        trace.append({"iteration": iteration, "b": b.tolist(), "residual": norm / area, "damping": damping})
        logger.info(f"coating step {iteration}: b = {np.round(b, 12).tolist()}, |M|/|Omega| = {norm / area:.3e}")

    return CoatingSearchResult(tuple(float(v) for v in b), r_e, f, iteration, norm / area,
                               coating_shell(r_e, b), trace)
