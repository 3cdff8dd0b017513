"""
Exterior conformal maps Phi(zeta) = zeta + sum_{n>=1} b_n zeta^{-n}.

The map sends the exterior of the unit disk onto the exterior of a simply
connected domain D; b_1 is the coefficient b_D that controls the
polarization tensor of a perfectly conducting D.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from ..config import DERIVATIVE_FLOOR
from ..errors import NonInjectiveMap

logger = logging.getLogger(__name__)

_CONSTRUCTOR_PROBES = 1024


def _as_complex(value) -> complex:
    """Accept complex numbers, reals, or [re, im] pairs."""
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError(f"complex coefficient must be a [re, im] pair, got {value!r}")
        return complex(float(value[0]), float(value[1]))
    return complex(value)


@dataclass(frozen=True)
class ConformalMap:
    """Laurent coefficients (b_1, ..., b_K) of an exterior Riemann map."""

    coefficients: Tuple[complex, ...] = ()

    def __post_init__(self):
        coeffs = tuple(_as_complex(c) for c in self.coefficients)
        # trailing zeros carry no information
        while coeffs and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        object.__setattr__(self, "coefficients", coeffs)

        if self.enclosed_area() <= 0:
            raise NonInjectiveMap(
                f"enclosed area pi(1 - sum n|b_n|^2) = {self.enclosed_area():.6g} is not positive"
            )
        self.check_injective(_CONSTRUCTOR_PROBES)

    @classmethod
    def from_coefficients(cls, coefficients: Iterable) -> "ConformalMap":
        return cls(tuple(coefficients))

    @property
    def b(self) -> np.ndarray:
        return np.array(self.coefficients, dtype=complex)

    @property
    def b_D(self) -> complex:
        return self.coefficients[0] if self.coefficients else 0j

    @property
    def order(self) -> int:
        return len(self.coefficients)

    def __call__(self, zeta) -> np.ndarray:
        zeta = np.asarray(zeta, dtype=complex)
        value = zeta.copy()
        for n, b_n in enumerate(self.coefficients, start=1):
            if b_n != 0:
                value = value + b_n * zeta ** (-n)
        return value

    def derivative(self, zeta) -> np.ndarray:
        zeta = np.asarray(zeta, dtype=complex)
        value = np.ones_like(zeta)
        for n, b_n in enumerate(self.coefficients, start=1):
            if b_n != 0:
                value = value - n * b_n * zeta ** (-n - 1)
        return value

    def second_derivative(self, zeta) -> np.ndarray:
        zeta = np.asarray(zeta, dtype=complex)
        value = np.zeros_like(zeta)
        for n, b_n in enumerate(self.coefficients, start=1):
            if b_n != 0:
                value = value + n * (n + 1) * b_n * zeta ** (-n - 2)
        return value

    def enclosed_area(self, r: float = 1.0) -> float:
        """Area enclosed by the image of |zeta| = r."""
        total = r * r
        for n, b_n in enumerate(self.coefficients, start=1):
            total -= n * abs(b_n) ** 2 * r ** (-2 * n)
        return float(np.pi * total)

    def check_injective(self, probes: int, r: float = 1.0) -> float:
        """Raise NonInjectiveMap if |Phi'| vanishes on the probe circle; return the minimum."""
        theta = 2.0 * np.pi * np.arange(probes) / probes
        min_speed = float(np.min(np.abs(self.derivative(r * np.exp(1j * theta)))))
        if min_speed <= DERIVATIVE_FLOOR:
            raise NonInjectiveMap(
                f"|Phi'| reaches {min_speed:.3e} on the {probes}-point probe circle |zeta|={r}"
            )
        return min_speed

    def normalized(self) -> Tuple["ConformalMap", float]:
        """
        Rotate coordinates so that b_D is real and nonnegative.

        Returns the map Psi(zeta) = e^{-i psi} Phi(e^{i psi} zeta) and the angle psi.
        Psi has coefficients b_n e^{-i(n+1)psi}.
        """
        if self.b_D == 0:
            return self, 0.0
        psi = float(np.angle(self.b_D)) / 2.0
        rotated = [b_n * np.exp(-1j * (n + 1) * psi) for n, b_n in enumerate(self.coefficients, start=1)]
        rotated[0] = complex(abs(self.b_D), 0.0)
        return ConformalMap(tuple(rotated)), psi

    def inverse(self, z, max_iter: int = 60, tol: float = 1e-14) -> np.ndarray:
        """
        Solve Phi(zeta) = z for exterior points by damped Newton iteration.

        Points where the iteration does not settle are returned as nan.
        """
        z = np.asarray(z, dtype=complex)
        zeta = z.copy()
        # keep the starting guess away from the singularity at the origin
        small = np.abs(zeta) < 1.0
        zeta[small] = 1.5 * np.exp(1j * np.angle(zeta[small]))

        residual = np.abs(self(zeta) - z)
        for _ in range(max_iter):
            active = residual > tol * np.maximum(1.0, np.abs(z))
            if not np.any(active):
                break
            step = (self(zeta[active]) - z[active]) / self.derivative(zeta[active])
            trial = zeta[active] - step
            trial_res = np.abs(self(trial) - z[active])
            worse = trial_res > residual[active]
            damping = 1.0
            while np.any(worse) and damping > 1e-4:
                damping *= 0.5
                trial[worse] = zeta[active][worse] - damping * step[worse]
                trial_res[worse] = np.abs(self(trial[worse]) - z[active][worse])
                worse = trial_res > residual[active]
            zeta[active] = trial
            residual[active] = trial_res

        failed = residual > 1e-9 * np.maximum(1.0, np.abs(z))
        if np.any(failed):
            zeta[failed] = np.nan
        return zeta

    def to_dict(self) -> Dict[str, List[List[float]]]:
        return {"coefficients": [[c.real, c.imag] for c in self.coefficients]}

    @classmethod
    def from_dict(cls, data: Dict) -> "ConformalMap":
        return cls(tuple(data.get("coefficients", [])))


def identity_map() -> ConformalMap:
    return ConformalMap(())


def monomial_map(order: int, coefficient: complex) -> ConformalMap:
    """Phi(zeta) = zeta + c zeta^{-order}."""
    coeffs: Sequence[complex] = [0j] * (order - 1) + [complex(coefficient)]
    return ConformalMap(tuple(coeffs))
