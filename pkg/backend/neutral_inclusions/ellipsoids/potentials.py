"""
Confocal ellipsoids and the over-determined shell problem.

A core D = {sum x_j^2/c_j^2 < 1} and a shell Omega = {rho(x) < rho0}, where rho is
the confocal coordinate: the root of sum x_j^2/(c_j^2 + rho) = 1. With
g(rho) = prod(c_j^2 + rho) the kernels

    phi_j(rho) = int_rho^inf ds / ((c_j^2 + s) sqrt(g(s))) = (2/3) R_D(x_k, x_l, x_j)
    I(rho)     = int_rho^inf ds / sqrt(g(s))               = 2 R_F(x_1, x_2, x_3)

are Carlson symmetric integrals with x_i = c_i^2 + rho.

The shell problem asks for w with Laplacian 1 in Omega minus D, grad w = 0 on the
outer boundary and grad w = A x + b on the inner one.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import brentq
from scipy.special import elliprd, elliprf

from ..config import INSIDE_CORE_TOL
from ..errors import InsideCore, InvalidInputError, OutsideShell

logger = logging.getLogger(__name__)


def _squared_axes(c2: Sequence[float]) -> np.ndarray:
    c2 = np.asarray(c2, dtype=float)
    if c2.shape != (3,) or not np.all(np.isfinite(c2)) or np.any(c2 <= 0):
        raise InvalidInputError(f"squared semi-axes must be three positive numbers, got {c2.tolist()}")
    return c2


# ---------------------------------------------------------------------------
# Special functions
# ---------------------------------------------------------------------------

def _coordinate_one(x: np.ndarray, c2: np.ndarray) -> float:
    q = float(np.sum(x * x / c2))
    if q < 1.0 - INSIDE_CORE_TOL:
        raise InsideCore(f"point {x.tolist()} lies inside the core (sum x_j^2/c_j^2 = {q:.15g} < 1)")
    if q <= 1.0:
        return 0.0

    r2 = float(np.sum(x * x))

    def excess(rho: float) -> float:
        return float(np.sum(x * x / (c2 + rho))) - 1.0

    lo = max(0.0, r2 - float(np.max(c2)))
    if excess(lo) <= 0.0:
        return lo
    return float(brentq(excess, lo, r2, xtol=1e-15, rtol=4.0 * np.finfo(float).eps, maxiter=200))


def ellipsoidal_coordinate(x, c2: Sequence[float]) -> Union[float, np.ndarray]:
    """
    Confocal coordinate rho(x) >= 0 for points on or outside the core.

    Accepts a single point or an (M, 3) batch.
    """
    c2 = _squared_axes(c2)
    points = np.asarray(x, dtype=float)
    if points.ndim == 1:
        return _coordinate_one(points, c2)
    return np.array([_coordinate_one(p, c2) for p in points])


@dataclass(frozen=True)
class EllipsoidIntegrals:
    g: float
    phi: Tuple[float, float, float]
    I: float

    def to_dict(self) -> Dict:
        return {"g": self.g, "phi": list(self.phi), "I": self.I}


def ellipsoid_kernels(rho, c2: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """phi_j and I at an array of rho values; phi has shape (..., 3)."""
    rho = np.asarray(rho, dtype=float)
    x1, x2, x3 = (c2[j] + rho for j in range(3))
    phi = np.stack([
        (2.0 / 3.0) * elliprd(x2, x3, x1),
        (2.0 / 3.0) * elliprd(x1, x3, x2),
        (2.0 / 3.0) * elliprd(x1, x2, x3),
    ], axis=-1)
    return phi, 2.0 * elliprf(x1, x2, x3)


def ellipsoid_integrals(rho: float, c2: Sequence[float]) -> EllipsoidIntegrals:
    c2 = _squared_axes(c2)
    rho = float(rho)
    if not rho >= 0:
        raise InvalidInputError(f"rho must be nonnegative, got {rho}")
    phi, total = ellipsoid_kernels(rho, c2)
    return EllipsoidIntegrals(float(np.prod(c2 + rho)), tuple(float(p) for p in phi), float(total))


def alpha_coefficients(rho0: float, c2: Sequence[float]) -> Tuple[float, float, float]:
    """
    alpha_j = -(1/4) int_0^rho0 sqrt(g(rho0)) / ((c_j^2 + s) sqrt(g(s))) ds.

    These satisfy 2 sum alpha_j = 1 - 1/f with f = sqrt(g(0)/g(rho0)).
    """
    c2 = _squared_axes(c2)
    rho0 = float(rho0)
    if not rho0 >= 0:
        raise InvalidInputError(f"rho0 must be nonnegative, got {rho0}")
    if rho0 == 0:
        return (0.0, 0.0, 0.0)
    phi0, _ = ellipsoid_kernels(0.0, c2)
    phi1, _ = ellipsoid_kernels(rho0, c2)
    scale = math.sqrt(float(np.prod(c2 + rho0))) / 4.0
    return tuple(float(v) for v in scale * (phi1 - phi0))


# ---------------------------------------------------------------------------
# Geometry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EllipsoidPair:
    """Core with squared semi-axes c2 inside the confocal shell rho = rho0."""

    c2: Tuple[float, float, float]
    rho0: float

    def __post_init__(self):
        c2 = _squared_axes(self.c2)
        if np.any(np.diff(c2) > 0):
            raise InvalidInputError(f"squared semi-axes must be ordered c1 >= c2 >= c3, got {c2.tolist()}")
        rho0 = float(self.rho0)
        if not rho0 > 0 or not math.isfinite(rho0):
            raise InvalidInputError(f"shell parameter rho0 must be positive, got {rho0}")
        object.__setattr__(self, "c2", tuple(float(c) for c in c2))
        object.__setattr__(self, "rho0", rho0)

    def g(self, rho: float) -> float:
        return float(np.prod(np.asarray(self.c2) + rho))

    @property
    def core_semi_axes(self) -> np.ndarray:
        return np.sqrt(np.asarray(self.c2))

    @property
    def shell_semi_axes(self) -> np.ndarray:
        return np.sqrt(np.asarray(self.c2) + self.rho0)

    @property
    def core_volume(self) -> float:
        return 4.0 * math.pi / 3.0 * math.sqrt(self.g(0.0))

    @property
    def shell_volume(self) -> float:
        return 4.0 * math.pi / 3.0 * math.sqrt(self.g(self.rho0))

    @property
    def volume_fraction(self) -> float:
        return math.sqrt(self.g(0.0) / self.g(self.rho0))

    @property
    def alpha(self) -> Tuple[float, float, float]:
        return alpha_coefficients(self.rho0, self.c2)

    def to_dict(self) -> Dict:
        return {"kind": "confocal", "c2": list(self.c2), "rho0": self.rho0}


@dataclass(frozen=True)
class BallPair:
    r_i: float
    r_e: float

    def __post_init__(self):
        r_i, r_e = float(self.r_i), float(self.r_e)
        if not 0 < r_i < r_e:
            raise InvalidInputError(f"balls need 0 < r_i < r_e, got r_i={r_i}, r_e={r_e}")
        object.__setattr__(self, "r_i", r_i)
        object.__setattr__(self, "r_e", r_e)

    def as_confocal(self) -> EllipsoidPair:
        return EllipsoidPair((self.r_i ** 2,) * 3, self.r_e ** 2 - self.r_i ** 2)

    def to_dict(self) -> Dict:
        return {"kind": "balls", "r_i": self.r_i, "r_e": self.r_e}


ShellPair = Union[EllipsoidPair, BallPair]


def shell_pair_from_dict(data: Dict) -> ShellPair:
    kind = data.get("kind", "confocal")
    try:
        if kind == "balls":
            return BallPair(data["r_i"], data["r_e"])
        if kind == "confocal":
            return EllipsoidPair(tuple(data["c2"]), data["rho0"])
    except KeyError as e:
        raise InvalidInputError(f"shell pair of kind '{kind}' is missing field {e}") from e
    raise InvalidInputError(f"unknown shell pair kind '{kind}'")


# ---------------------------------------------------------------------------
# Shell problem
# ---------------------------------------------------------------------------

Evaluator = Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray]]


@dataclass(frozen=True)
class OdpSolution:
    """w and its gradient on the closed shell, with the inner affine data A x + b."""

    pair: ShellPair
    evaluator: Evaluator
    A: np.ndarray
    b: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __call__(self, x) -> Tuple[np.ndarray, np.ndarray]:
        points = np.atleast_2d(np.asarray(x, dtype=float))
        return self.evaluator(points)

    def to_dict(self) -> Dict:
        return {"pair": self.pair.to_dict(), "A": self.A.tolist(), "b": self.b.tolist()}


def _shell_coordinates(pair: EllipsoidPair, points: np.ndarray) -> np.ndarray:
    try:
        rho = ellipsoidal_coordinate(points, pair.c2)
    except InsideCore as e:
        raise OutsideShell(f"point is not in the closed shell: {e}") from e
    limit = pair.rho0 * (1.0 + 1e-10) + 1e-14
    if np.any(rho > limit):
        worst = int(np.argmax(rho))
        raise OutsideShell(f"point {points[worst].tolist()} has rho = {rho[worst]:.6g} > rho0 = {pair.rho0:.6g}")
    return np.minimum(rho, pair.rho0)


def _confocal_solution(pair: EllipsoidPair) -> OdpSolution:
    c2 = np.asarray(pair.c2)
    phi0, _ = ellipsoid_kernels(pair.rho0, c2)
    scale = math.sqrt(pair.g(pair.rho0)) / 2.0

    def evaluate(points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        rho = _shell_coordinates(pair, points)
        phi, total = ellipsoid_kernels(rho, c2)
        x2 = points * points
        w = scale * 0.5 * (total - np.sum(phi * x2, axis=1) + x2 @ phi0)
        grad = scale * (phi0[None, :] - phi) * points
        return w, grad

    return OdpSolution(pair, evaluate, np.diag(2.0 * np.asarray(pair.alpha)))


def _ball_solution(pair: BallPair) -> OdpSolution:
    r_e3 = pair.r_e ** 3

    def evaluate(points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        r = np.linalg.norm(points, axis=1)
        tol = 1e-12 * pair.r_e
        if np.any(r < pair.r_i - tol) or np.any(r > pair.r_e + tol):
            raise OutsideShell(f"radii {r.min():.6g}..{r.max():.6g} leave the shell [{pair.r_i}, {pair.r_e}]")
        w = r_e3 / (3.0 * r) + r * r / 6.0
        grad = (1.0 / 3.0 - r_e3 / (3.0 * r ** 3))[:, None] * points
        return w, grad

    A = (1.0 - r_e3 / pair.r_i ** 3) / 3.0 * np.eye(3)
    return OdpSolution(pair, evaluate, A)


def odp_solution(pair: ShellPair) -> OdpSolution:
    if isinstance(pair, BallPair):
        return _ball_solution(pair)
    return _confocal_solution(pair)


@dataclass(frozen=True)
class OdpEvaluation:
    w: np.ndarray
    grad: np.ndarray
    A: np.ndarray

    def to_dict(self) -> Dict:
        return {"w": self.w.tolist(), "grad": self.grad.tolist(), "A": self.A.tolist()}


def odp_w(pair: ShellPair, x) -> OdpEvaluation:
    """w, grad w and A at points of the closed shell."""
    solution = odp_solution(pair)
    w, grad = solution(x)
    return OdpEvaluation(w, grad, solution.A)


@dataclass(frozen=True)
class OdpResidual:
    laplacian_residual: float
    outer_grad_max: float
    inner_affine_residual: float

    def to_dict(self) -> Dict:
        return {
            "laplacian_residual": self.laplacian_residual,
            "outer_grad_max": self.outer_grad_max,
            "inner_affine_residual": self.inner_affine_residual,
        }


def _sphere_grid(n: int) -> np.ndarray:
    """Unit vectors on an n x 2n latitude/longitude grid (poles excluded)."""
    theta = (np.arange(n) + 0.5) * np.pi / n
    phi = np.arange(2 * n) * np.pi / n
    t, p = np.meshgrid(theta, phi, indexing="ij")
    return np.column_stack([(np.sin(t) * np.cos(p)).ravel(), (np.sin(t) * np.sin(p)).ravel(), np.cos(t).ravel()])


def odp_residual(solution: OdpSolution, pair: Optional[ShellPair] = None,
                 n_samples: int = 200, seed: int = 0) -> OdpResidual:
    """Diagnostic residuals of the three conditions of the shell problem."""
    pair = pair or solution.pair
    confocal = pair.as_confocal() if isinstance(pair, BallPair) else pair
    c2 = np.asarray(confocal.c2)
    rng = np.random.default_rng(seed)

    # interior: random points on random level sets away from both boundaries
    directions = rng.normal(size=(n_samples, 3))
    directions /= np.linalg.norm(directions, axis=1)[:, None]
    rho = confocal.rho0 * rng.uniform(0.05, 0.95, size=n_samples)
    interior = np.sqrt(c2[None, :] + rho[:, None]) * directions

    h = 1e-4 * float(np.max(confocal.shell_semi_axes))
    center, _ = solution(interior)
    laplacian = -6.0 * center
    for axis in range(3):
        step = np.zeros(3)
        step[axis] = h
        laplacian = laplacian + solution(interior + step)[0] + solution(interior - step)[0]
    laplacian_residual = float(np.max(np.abs(laplacian / h ** 2 - 1.0)))

    grid = _sphere_grid(max(8, int(math.sqrt(n_samples))))
    _, outer_grad = solution(confocal.shell_semi_axes[None, :] * grid)
    outer_grad_max = float(np.max(np.linalg.norm(outer_grad, axis=1)))

    inner_points = confocal.core_semi_axes[None, :] * grid
    _, inner_grad = solution(inner_points)
    affine = inner_points @ solution.A.T + solution.b[None, :]
    inner_residual = float(np.max(np.linalg.norm(inner_grad - affine, axis=1)))

    logger.info(f"shell residuals: laplacian {laplacian_residual:.3e}, outer {outer_grad_max:.3e}, "
                f"inner {inner_residual:.3e}")
    return OdpResidual(laplacian_residual, outer_grad_max, inner_residual)
