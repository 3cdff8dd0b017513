"""
Conductivity profiles for simple and core-shell inclusions.

sigma_c may be math.inf (perfect conductor). The matrix conductivity is a
length-d diagonal; it is isotropic when all entries agree.
"""

import math
from dataclasses import dataclass
from typing import Dict, Tuple, Union

from ..errors import InvalidInputError, SingularContrast


def _conductivity(name: str, value, allow_inf: bool = False) -> float:
    if isinstance(value, str) and value.strip().lower() in ("inf", "infinity", "+inf"):
        value = math.inf
    value = float(value)
    if math.isnan(value) or value <= 0 or (math.isinf(value) and not allow_inf):
        raise InvalidInputError(f"{name} must be a positive{' (or inf)' if allow_inf else ''} "
                                f"conductivity, got {value}")
    return value


def inverse_contrast(a: float, b: float) -> float:
    """2(a - b)/(a + b), the reciprocal of (a + b)/(2(a - b)); a may be inf."""
    if math.isinf(a):
        return 2.0
    return 2.0 * (a - b) / (a + b)


def contrast_parameter(k: float) -> float:
    """lambda = (k + 1)/(2(k - 1)) for a simple inclusion of contrast k."""
    if math.isinf(k):
        return 0.5
    if k == 1:
        raise SingularContrast("contrast k = 1 has no lambda (no inclusion)")
    return (k + 1.0) / (2.0 * (k - 1.0))


def format_conductivity(value: float) -> Union[float, str]:
    return "inf" if math.isinf(value) else value


@dataclass(frozen=True)
class ConductivityProfile:
    sigma_c: float
    sigma_s: float
    sigma_m: Tuple[float, ...] = (1.0, 1.0)

    def __post_init__(self):
        object.__setattr__(self, "sigma_c", _conductivity("sigma_c", self.sigma_c, allow_inf=True))
        object.__setattr__(self, "sigma_s", _conductivity("sigma_s", self.sigma_s))
        sigma_m = self.sigma_m
        if isinstance(sigma_m, (int, float, str)):
            sigma_m = (sigma_m, sigma_m)
        sigma_m = tuple(_conductivity("sigma_m", s) for s in sigma_m)
        if len(sigma_m) not in (2, 3):
            raise InvalidInputError(f"sigma_m must have 2 or 3 diagonal entries, got {len(sigma_m)}")
        object.__setattr__(self, "sigma_m", sigma_m)

    @property
    def dimension(self) -> int:
        return len(self.sigma_m)

    @property
    def isotropic(self) -> bool:
        return len(set(self.sigma_m)) == 1

    @property
    def matrix_conductivity(self) -> float:
        if not self.isotropic:
            raise InvalidInputError(f"matrix conductivity {self.sigma_m} is anisotropic")
        return self.sigma_m[0]

    @property
    def lam(self) -> float:
        if self.sigma_c == self.sigma_s:
            raise SingularContrast("lambda is undefined for sigma_c = sigma_s")
        if math.isinf(self.sigma_c):
            return 0.5
        return (self.sigma_c + self.sigma_s) / (2.0 * (self.sigma_c - self.sigma_s))

    @property
    def mu(self) -> float:
        sigma_m = self.matrix_conductivity
        if self.sigma_s == sigma_m:
            raise SingularContrast("mu is undefined for sigma_s = sigma_m")
        return (self.sigma_s + sigma_m) / (2.0 * (self.sigma_s - sigma_m))

    @property
    def core_factor(self) -> float:
        """1/lambda, finite for every admissible profile."""
        return inverse_contrast(self.sigma_c, self.sigma_s)

    @property
    def shell_factor(self) -> float:
        """1/mu, finite for every admissible profile."""
        return inverse_contrast(self.sigma_s, self.matrix_conductivity)

    @property
    def beta(self) -> Tuple[float, ...]:
        return tuple(s / self.sigma_s - 1.0 for s in self.sigma_m)

    @property
    def gamma(self) -> float:
        return 1.0 - self.sigma_c / self.sigma_s

    @property
    def contrast(self) -> float:
        """sigma_c / sigma_m for a simple inclusion."""
        return self.sigma_c / self.matrix_conductivity

    def to_dict(self) -> Dict:
        return {
            "sigma_c": format_conductivity(self.sigma_c),
            "sigma_s": self.sigma_s,
            "sigma_m": list(self.sigma_m),
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "ConductivityProfile":
        try:
            return cls(data["sigma_c"], data["sigma_s"], data.get("sigma_m", 1.0))
        except KeyError as e:
            raise InvalidInputError(f"conductivity profile is missing field {e}") from e
