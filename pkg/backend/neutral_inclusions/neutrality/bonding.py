"""
Bonding parameters for imperfectly bonded, perfectly conducting inclusions.

A bonding parameter is stored through its pullback beta~(theta) = beta(Phi(e^{i theta})) |Phi'(e^{i theta})|
sampled on an equispaced theta grid and interpolated trigonometrically.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from ..config import DEFAULT_MODES, PROBE_FACTOR, REFINE_FD_STEP, REFINE_MAX_ITER, REFINE_TOL
from ..errors import BDTooLarge, NoConvergence, NonPositiveBeta, SingularSystem
from ..geometry.conformal import ConformalMap

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 257
BD_LIMIT = 2.0 - math.sqrt(3.0)


def _grid(n: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(n) / n


@dataclass(frozen=True)
class BondingParameter:
    """
    Samples of beta~ on theta_k = 2 pi k / K, with the map they refer to.

    angle is the rotation that makes b_D real and nonnegative; coefficients is
    (A, B, C) when beta~ = A + B cos 2theta + C sin 2theta.
    """

    conformal_map: ConformalMap
    scaled_samples: np.ndarray
    angle: float = 0.0
    coefficients: Optional[Tuple[float, float, float]] = None
    label: str = "custom"

    def __post_init__(self):
        samples = np.asarray(self.scaled_samples, dtype=float)
        if samples.ndim != 1 or samples.size < 5:
            raise ValueError("bonding parameter needs at least 5 samples")
        if not np.all(np.isfinite(samples)) or np.min(samples) <= 0:
            raise NonPositiveBeta(f"bonding parameter reaches {np.min(samples):.6g} <= 0")
        samples.setflags(write=False)
        object.__setattr__(self, "scaled_samples", samples)

    @property
    def n_samples(self) -> int:
        return self.scaled_samples.size

    def scaled_at(self, theta) -> np.ndarray:
        """Trigonometric interpolant of beta~ at arbitrary angles."""
        theta = np.asarray(theta, dtype=float)
        k_max = (self.n_samples - 1) // 2
        coeffs = np.fft.rfft(self.scaled_samples)[: k_max + 1] / self.n_samples
        modes = np.arange(1, k_max + 1)
        phases = np.exp(1j * np.multiply.outer(theta, modes))
        return coeffs[0].real + 2.0 * np.real(phases @ coeffs[1:])

    def at(self, theta) -> np.ndarray:
        """beta at the boundary point Phi(e^{i theta})."""
        theta = np.asarray(theta, dtype=float)
        return self.scaled_at(theta) / np.abs(self.conformal_map.derivative(np.exp(1j * theta)))

    @property
    def values(self) -> np.ndarray:
        return self.at(_grid(self.n_samples))

    def min_value(self, probes: Optional[int] = None) -> float:
        probes = probes or PROBE_FACTOR * self.n_samples
        return float(np.min(self.at(_grid(probes))))

    def to_dict(self) -> Dict:
        data = {
            "label": self.label,
            "angle": self.angle,
            "map": self.conformal_map.to_dict(),
            "n_samples": self.n_samples,
            "min_beta": self.min_value(),
            "max_beta": float(np.max(self.values)),
        }
        if self.coefficients is not None:
            data["coefficients"] = list(self.coefficients)
        return data

    @classmethod
    def from_function(cls, conformal_map: ConformalMap, beta: Callable[[np.ndarray], np.ndarray],
                      n_samples: int = DEFAULT_SAMPLES, label: str = "custom") -> "BondingParameter":
        """Sample beta(z) at the boundary points z = Phi(e^{i theta})."""
        zeta = np.exp(1j * _grid(n_samples))
        values = np.asarray(beta(conformal_map(zeta)), dtype=float) * np.ones(n_samples)
        return cls(conformal_map, values * np.abs(conformal_map.derivative(zeta)), label=label)

    @classmethod
    def constant(cls, conformal_map: ConformalMap, value: float,
                 n_samples: int = DEFAULT_SAMPLES) -> "BondingParameter":
        return cls.from_function(conformal_map, lambda z: np.full(z.shape, float(value)),
                                 n_samples, label=f"constant {value:g}")

    @classmethod
    def from_profile(cls, conformal_map: ConformalMap, coefficients: Tuple[float, float, float],
                     n_samples: int = DEFAULT_SAMPLES, angle: float = 0.0,
                     label: str = "profile") -> "BondingParameter":
        """beta~ = A + B cos 2theta + C sin 2theta."""
        a, b, c = (float(v) for v in coefficients)
        theta = _grid(n_samples)
        samples = a + b * np.cos(2.0 * theta) + c * np.sin(2.0 * theta)
        return cls(conformal_map, samples, angle=angle, coefficients=(a, b, c), label=label)


def weakly_neutral_profile(b: float) -> Tuple[float, float]:
    """(A, B) with beta~ = A + B cos 2theta in the frame where b_D = b >= 0."""
    a = 1.0 / (1.0 + b) + 1.0 / (1.0 - b) - 1.0
    return a, 2.0 / (1.0 + b) - 2.0 / (1.0 - b)


def beta_weakly_neutral(conformal_map: ConformalMap, n_samples: int = DEFAULT_SAMPLES) -> BondingParameter:
    """
    Bonding parameter that makes the perfectly conducting domain weakly neutral.

    In coordinates rotated by psi = arg(b_D)/2 the pullback is
    A + B cos 2(theta - psi), positive exactly when |b_D| < 2 - sqrt(3).
    """
    _, psi = conformal_map.normalized()
    b = abs(conformal_map.b_D)
    if b > BD_LIMIT:
        raise BDTooLarge(f"|b_D| = {b:.6g} exceeds 2 - sqrt(3) = {BD_LIMIT:.6g}")
    a, c = weakly_neutral_profile(b)
    if a - abs(c) <= 1e-12:
        raise BDTooLarge(f"|b_D| = {b:.6g} makes the bonding parameter vanish (minimum {a - abs(c):.3e})")

    coefficients = (a, c * math.cos(2.0 * psi), c * math.sin(2.0 * psi))
    beta = BondingParameter.from_profile(conformal_map, coefficients, n_samples, angle=psi,
                                         label="weakly neutral")
    logger.info(f"weakly neutral beta: |b_D| = {b:.6g}, psi = {psi:.6g}, min beta = {beta.min_value():.6g}")
    return beta


def refine_weakly_neutral_beta(conformal_map: ConformalMap, n_modes: int = DEFAULT_MODES,
                               tol: float = REFINE_TOL, max_iter: int = REFINE_MAX_ITER,
                               n_samples: int = DEFAULT_SAMPLES) -> BondingParameter:
    """
    Newton correction of the weakly neutral profile.

    Keeps the form A + B cos 2theta + C sin 2theta and drives
    (Re alpha_1(1), Im alpha_1(1), Im alpha_1(i)) to zero; the fourth component
    Re alpha_1(i) = -Im alpha_1(1) by symmetry of the polarization tensor.
    """
    from ..fields.spectral import far_field_coefficients

    start = beta_weakly_neutral(conformal_map, n_samples)
    x = np.array(start.coefficients)

    def residual(coefficients: np.ndarray) -> np.ndarray:
        if coefficients[0] <= math.hypot(coefficients[1], coefficients[2]):
            raise NonPositiveBeta(f"refined profile {coefficients.tolist()} is not positive")
        beta = BondingParameter.from_profile(conformal_map, coefficients, n_samples)
        coeffs = far_field_coefficients(conformal_map, beta, n_modes)
        return np.array([coeffs.alpha_one.real, coeffs.alpha_one.imag, coeffs.alpha_i.imag])

    value = residual(x)
    for iteration in range(1, max_iter + 1):
        if np.max(np.abs(value)) <= tol:
            break
        jacobian = np.empty((3, 3))
        h = REFINE_FD_STEP * max(1.0, abs(x[0]))
        for k in range(3):
            shifted = x.copy()
            shifted[k] += h
            jacobian[:, k] = (residual(shifted) - value) / h
        try:
            x = x - np.linalg.solve(jacobian, value)
        except np.linalg.LinAlgError as e:
            raise SingularSystem("bonding refinement Jacobian is singular") from e
        value = residual(x)
        logger.info(f"bonding refinement step {iteration}: max |alpha_1| = {np.max(np.abs(value)):.3e}")
    else:
        if np.max(np.abs(value)) > tol:
            raise NoConvergence(f"bonding refinement stalled at max |alpha_1| = {np.max(np.abs(value)):.3e}")

    return BondingParameter.from_profile(conformal_map, x, n_samples, angle=start.angle,
                                         label="weakly neutral (refined)")
