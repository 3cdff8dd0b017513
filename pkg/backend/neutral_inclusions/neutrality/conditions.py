"""
Closed-form neutrality conditions.

Concentric disks (d=2) and balls (d=3) with core fraction f are neutral when

    (d - 1 + s)(t - 1) + f(1 - s)(t + d - 1) = 0,   s = sigma_c/sigma_s, t = sigma_m/sigma_s.

Confocal ellipsoids need an anisotropic matrix, given coefficientwise by the
alpha_j of the shell.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Sequence, Tuple

import numpy as np

from ..ellipsoids.potentials import EllipsoidPair
from ..errors import GammaTooLarge, InvalidInputError, NonPositiveBeta, NoPositiveSolution, SingularSystem
from ..polarization.profile import _conductivity, format_conductivity

logger = logging.getLogger(__name__)


def _check_dimension(d: int) -> int:
    if d not in (2, 3):
        raise InvalidInputError(f"dimension must be 2 or 3, got {d}")
    return int(d)


def _check_fraction(f: float) -> float:
    f = float(f)
    if not 0.0 < f < 1.0:
        raise InvalidInputError(f"volume fraction must lie in (0, 1), got {f}")
    return f


def neutral_matrix_conductivity(sigma_c: float, sigma_s: float, f: float, d: int = 2) -> float:
    """Matrix conductivity that makes concentric disks/balls with core fraction f neutral."""
    sigma_c = _conductivity("sigma_c", sigma_c, allow_inf=True)
    sigma_s = _conductivity("sigma_s", sigma_s)
    f = _check_fraction(f)
    d = _check_dimension(d)

    if math.isinf(sigma_c):
        t = (1.0 + f * (d - 1)) / (1.0 - f)
    else:
        s = sigma_c / sigma_s
        denominator = (d - 1 + s) + f * (1.0 - s)
        if denominator == 0:
            raise NoPositiveSolution("neutrality equation is degenerate (zero coefficient of sigma_m)")
        t = ((d - 1 + s) - f * (d - 1) * (1.0 - s)) / denominator

    if not t > 0:
        raise NoPositiveSolution(f"neutrality equation gives sigma_m/sigma_s = {t:.6g} <= 0")
    return sigma_s * t


def neutral_volume_fraction(sigma_c: float, sigma_s: float, sigma_m: float, d: int = 2) -> float:
    """Core fraction f in (0, 1) that makes concentric disks/balls neutral for the given conductivities."""
    sigma_c = _conductivity("sigma_c", sigma_c, allow_inf=True)
    sigma_s = _conductivity("sigma_s", sigma_s)
    sigma_m = _conductivity("sigma_m", sigma_m)
    d = _check_dimension(d)

    t = sigma_m / sigma_s
    if math.isinf(sigma_c):
        f = (t - 1.0) / (t + d - 1.0)
    else:
        s = sigma_c / sigma_s
        if s == 1:
            raise NoPositiveSolution("sigma_c = sigma_s: every fraction is neutral only for sigma_m = sigma_s")
        f = -(d - 1 + s) * (t - 1.0) / ((1.0 - s) * (t + d - 1.0))

    if not 0.0 < f < 1.0:
        raise NoPositiveSolution(f"neutrality gives volume fraction {f:.6g} outside (0, 1)")
    return f


def beta_disk(r: float, sigma_c: float, sigma_m: float) -> float:
    """Bonding parameter beta = sigma_c sigma_m / (r (sigma_c - sigma_m)) making a disk neutral."""
    r = float(r)
    if not r > 0:
        raise InvalidInputError(f"radius must be positive, got {r}")
    sigma_c = _conductivity("sigma_c", sigma_c, allow_inf=True)
    sigma_m = _conductivity("sigma_m", sigma_m)
    if sigma_c <= sigma_m:
        raise NonPositiveBeta(f"neutral bonding needs sigma_c > sigma_m, got {sigma_c} <= {sigma_m}")
    if math.isinf(sigma_c):
        return sigma_m / r
    return sigma_c * sigma_m / (r * (sigma_c - sigma_m))


@dataclass(frozen=True)
class LcDiskSolution:
    c: float
    d: float

    def polarization(self, r: float) -> float:
        """Diagonal entry of the disk's polarization tensor, -2 pi r^2 d."""
        return -2.0 * math.pi * r * r * self.d

    def to_dict(self) -> Dict:
        return {"c": self.c, "d": self.d}


def solve_lc_disk(r: float, sigma_c: float, sigma_m: float, beta: float) -> LcDiskSolution:
    """
    Disk with an imperfect (spring-type) interface.

    Interior u = c a.x, exterior u = a.x + d r^2 a.x/|x|^2. The flux condition
    gives sigma_c c = sigma_m(1 - d) and the spring condition gives
    beta r (1 + d - c) = sigma_m (1 - d). beta = inf is perfect bonding.
    """
    r = float(r)
    if not r > 0:
        raise InvalidInputError(f"radius must be positive, got {r}")
    sigma_c = _conductivity("sigma_c", sigma_c, allow_inf=True)
    sigma_m = _conductivity("sigma_m", sigma_m)
    beta = float(beta)
    if math.isnan(beta) or beta < 0:
        raise InvalidInputError(f"beta must be nonnegative, got {beta}")

    if math.isinf(beta):
        if math.isinf(sigma_c):
            return LcDiskSolution(0.0, -1.0)
        d = (sigma_m - sigma_c) / (sigma_m + sigma_c)
        return LcDiskSolution(1.0 + d, d)

    br = beta * r
    if math.isinf(sigma_c):
        if br + sigma_m == 0:
            raise SingularSystem("disk interface system is singular")
        return LcDiskSolution(0.0, (sigma_m - br) / (sigma_m + br))

    system = np.array([[sigma_c, sigma_m], [-br, br + sigma_m]])
    det = float(np.linalg.det(system))
    if abs(det) <= 1e-14 * float(np.abs(system).max()) ** 2:
        raise SingularSystem(f"disk interface system has determinant {det:.3e}")
    c, d = np.linalg.solve(system, np.array([sigma_m, sigma_m - br]))
    return LcDiskSolution(float(c), float(d))


@dataclass(frozen=True)
class ConfocalConductivity:
    sigma_m: Tuple[float, float, float]
    alpha: Tuple[float, float, float]
    volume_fraction: float
    gamma: float
    gamma_bound: float
    trace_residual: float

    def to_dict(self) -> Dict:
        return {
            "sigma_m": list(self.sigma_m),
            "alpha": list(self.alpha),
            "volume_fraction": self.volume_fraction,
            "gamma": format_conductivity(self.gamma),
            "gamma_bound": self.gamma_bound,
            "trace_residual": self.trace_residual,
        }


def confocal_matrix_conductivity(c2: Sequence[float], rho0: float, sigma_c: float,
                                 sigma_s: float) -> ConfocalConductivity:
    """
    Diagonal matrix conductivity making a confocal ellipsoid pair neutral.

    beta_j = -gamma/(2 alpha_j gamma + 1/f) and sigma_m,j = sigma_s (1 + beta_j),
    with gamma = 1 - sigma_c/sigma_s restricted to
    |gamma| <= min_j (1/f) / (|1 - 2 alpha_j| + 1) so every sigma_m,j stays positive.
    """
    pair = EllipsoidPair(tuple(c2), rho0)
    sigma_c = _conductivity("sigma_c", sigma_c, allow_inf=True)
    sigma_s = _conductivity("sigma_s", sigma_s)

    alpha = pair.alpha
    f_inv = 1.0 / pair.volume_fraction
    bound = min(f_inv / (abs(1.0 - 2.0 * a) + 1.0) for a in alpha)
    gamma = -math.inf if math.isinf(sigma_c) else 1.0 - sigma_c / sigma_s
    if abs(gamma) > bound:
        raise GammaTooLarge(f"|gamma| = {abs(gamma):.6g} exceeds the positivity bound {bound:.6g}")

    if gamma == 0:
        logger.info("gamma = 0: homogeneous pair, sigma_m = sigma_s")
        return ConfocalConductivity((sigma_s,) * 3, alpha, pair.volume_fraction, 0.0, bound, 0.0)

    betas = [-gamma / (2.0 * a * gamma + f_inv) for a in alpha]
    sigma_m = tuple(sigma_s * (1.0 + b) for b in betas)
    if min(sigma_m) <= 0:
        raise GammaTooLarge(f"matrix conductivity {sigma_m} is not positive")

    f = pair.volume_fraction
    residual = (2.0 * sigma_s + sigma_c) / (sigma_s - sigma_c) + (f / 3.0) * sum(
        (s + 2.0 * sigma_s) / (s - sigma_s) for s in sigma_m
    )
    logger.info(f"confocal sigma_m = {sigma_m}, trace residual {residual:.3e}")
    return ConfocalConductivity(sigma_m, alpha, f, gamma, bound, float(residual))
