"""
Single-layer potentials and Nystrom matrices in 2-D.

Gamma(x) = log|x| / (2 pi). The Neumann-Poincare operator K* has kernel
<x - y, nu(x)> / (2 pi |x - y|^2), whose diagonal limit on a smooth curve is
kappa(x) / (4 pi). All quadratures are the periodic trapezoidal rule with the
arclength weights of the source curve.
"""

import logging
from dataclasses import dataclass
from typing import Union

import numpy as np

from ..config import CROSS_SEPARATION_FACTOR, EVAL_DISTANCE_FACTOR
from ..errors import CurvesTooClose, PointTooClose
from ..geometry.curves import BoundaryCurve

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class LayerDensity:
    """Density values at the nodes of a curve."""

    values: np.ndarray
    curve: BoundaryCurve

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.curve.n,):
            raise ValueError(f"density has shape {values.shape}, curve has {self.curve.n} nodes")
        object.__setattr__(self, "values", values)

    @property
    def total(self) -> float:
        """Arclength-weighted integral of the density."""
        return float(np.sum(self.curve.weights * self.values))

    def is_mean_zero(self, tol: float = 1e-10) -> bool:
        scale = self.curve.perimeter * max(float(np.max(np.abs(self.values))), 1e-300)
        return abs(self.total) < tol * scale


@dataclass(frozen=True)
class BoundaryOperatorMatrix:
    """Dense Nystrom matrix acting on densities of the source curve."""

    matrix: np.ndarray
    source: BoundaryCurve
    target: BoundaryCurve
    tag: str

    def __matmul__(self, density) -> np.ndarray:
        return self.matrix @ np.asarray(density, dtype=float)


DensityLike = Union[LayerDensity, np.ndarray]


def _density_values(curve: BoundaryCurve, density: DensityLike) -> np.ndarray:
    if isinstance(density, LayerDensity):
        return density.values
    values = np.asarray(density, dtype=float)
    if values.shape[-1] != curve.n:
        raise ValueError(f"density length {values.shape[-1]} does not match {curve.n} nodes")
    return values


def evaluation_distance(curve: BoundaryCurve) -> float:
    """Smallest admissible distance between an evaluation point and the curve."""
    return EVAL_DISTANCE_FACTOR * np.pi * curve.perimeter / curve.n


def check_evaluation_points(curve: BoundaryCurve, points: np.ndarray) -> np.ndarray:
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.size == 0:
        return points.reshape(0, 2)
    limit = evaluation_distance(curve)
    nearest = curve.distance_to(points)
    if np.any(nearest <= limit):
        worst = int(np.argmin(nearest))
        raise PointTooClose(
            f"point {points[worst].tolist()} lies {nearest[worst]:.3e} from the curve; "
            f"evaluation requires distance > {limit:.3e} (2*pi*perimeter/N)"
        )
    return points


def single_layer_matrix(curve: BoundaryCurve, points: np.ndarray) -> np.ndarray:
    """Rows map a density to S[phi] at each point."""
    points = check_evaluation_points(curve, points)
    dx = points[:, None, 0] - curve.points[None, :, 0]
    dy = points[:, None, 1] - curve.points[None, :, 1]
    return np.log(np.hypot(dx, dy)) / TWO_PI * curve.weights[None, :]


def single_layer_eval(curve: BoundaryCurve, density: DensityLike, points: np.ndarray) -> np.ndarray:
    """S[phi](x) = int Gamma(x - y) phi(y) dS(y) at off-curve points."""
    return single_layer_matrix(curve, points) @ _density_values(curve, density)


def single_layer_gradient(curve: BoundaryCurve, density: DensityLike, points: np.ndarray) -> np.ndarray:
    """Gradient of S[phi] at off-curve points, shape (M, 2)."""
    points = check_evaluation_points(curve, points)
    phi = _density_values(curve, density) * curve.weights
    dx = points[:, None, 0] - curve.points[None, :, 0]
    dy = points[:, None, 1] - curve.points[None, :, 1]
    r2 = dx * dx + dy * dy
    return np.column_stack([(dx / r2) @ phi, (dy / r2) @ phi]) / TWO_PI


def np_matrix(curve: BoundaryCurve) -> BoundaryOperatorMatrix:
    """Nystrom matrix of K* on the curve."""
    x = curve.points
    dx = x[:, None, 0] - x[None, :, 0]
    dy = x[:, None, 1] - x[None, :, 1]
    r2 = dx * dx + dy * dy
    np.fill_diagonal(r2, 1.0)
    kernel = (dx * curve.normals[:, None, 0] + dy * curve.normals[:, None, 1]) / (TWO_PI * r2)
    np.fill_diagonal(kernel, curve.curvature / (4.0 * np.pi))
    return BoundaryOperatorMatrix(kernel * curve.weights[None, :], curve, curve, "NP")


def _min_separation(source: BoundaryCurve, target: BoundaryCurve) -> float:
    return float(np.min(source.distance_to(target.points)))


def dnS_cross_matrix(source: BoundaryCurve, target: BoundaryCurve) -> BoundaryOperatorMatrix:
    """Normal derivative on target of the single layer potential of a source density."""
    separation = _min_separation(source, target)
    limit = CROSS_SEPARATION_FACTOR * max(source.max_node_spacing, target.max_node_spacing)
    if separation < limit:
        raise CurvesTooClose(
            f"curves are {separation:.3e} apart; need at least {limit:.3e} "
            f"({CROSS_SEPARATION_FACTOR:g} x max node spacing)"
        )
    dx = target.points[:, None, 0] - source.points[None, :, 0]
    dy = target.points[:, None, 1] - source.points[None, :, 1]
    r2 = dx * dx + dy * dy
    kernel = (dx * target.normals[:, None, 0] + dy * target.normals[:, None, 1]) / (TWO_PI * r2)
    return BoundaryOperatorMatrix(kernel * source.weights[None, :], source, target, "dnS_cross")


def winding_number(curve: BoundaryCurve, points: np.ndarray) -> np.ndarray:
    """
    Gauss integral (1/2pi) oint <y - x, nu(y)>/|x - y|^2 dS(y): 1 inside, 0 outside.

    Accurate only for points respecting the evaluation distance rule.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    dx = curve.points[None, :, 0] - points[:, None, 0]
    dy = curve.points[None, :, 1] - points[:, None, 1]
    r2 = dx * dx + dy * dy
    flux = (dx * curve.normals[None, :, 0] + dy * curve.normals[None, :, 1]) / r2
    return flux @ curve.weights / TWO_PI
