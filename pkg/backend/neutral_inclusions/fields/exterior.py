"""
Potentials generated by inclusions placed in a uniform background field a.x.

Perfectly bonded inclusions are represented with single layers,

    simple:      u = a.x + S_D[a . phi]
    core-shell:  u = a.x + S_D[a . phi1] + S_Omega[a . phi2],

reusing the densities of the polarization tensor solves. Imperfectly bonded
inclusions come from the spectral solver in fields.spectral.
"""

import csv
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np

from ..config import CSV_FLOAT_FORMAT, CSV_HEADER, MAX_GRID_RESOLUTION, MIN_DIRECTIONS, NOISE_FLOOR
from ..errors import InvalidInputError
from ..geometry.curves import BoundaryCurve
from ..layer_potentials.operators import evaluation_distance, single_layer_eval, winding_number
from ..polarization.profile import ConductivityProfile
from ..polarization.tensors import solve_coreshell_densities, solve_simple_densities

logger = logging.getLogger(__name__)

GRID_CHUNK = 4096


@dataclass(frozen=True)
class SimpleInclusion:
    curve: BoundaryCurve
    k: float


@dataclass(frozen=True)
class CoreShellInclusion:
    core: BoundaryCurve
    shell: BoundaryCurve
    profile: ConductivityProfile


InclusionConfig = Union[SimpleInclusion, CoreShellInclusion]


def _direction(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.shape != (2,) or not np.all(np.isfinite(a)) or not np.any(a):
        raise InvalidInputError(f"background field must be a nonzero 2-vector, got {a.tolist()}")
    return a


@dataclass(frozen=True)
class FieldSolution:
    """
    Total potential u for the background field a.x.

    provenance is "simple", "coreshell" or "imperfect". Layer densities have
    shape (2, N), one row per coordinate field; imperfect solutions carry the
    spectral solution instead.
    """

    direction: np.ndarray
    provenance: str
    curves: Tuple[BoundaryCurve, ...]
    densities: Tuple[np.ndarray, ...] = ()
    spectral: Optional[object] = None
    metadata: Dict = field(default_factory=dict)

    @property
    def outer_curve(self) -> BoundaryCurve:
        return self.curves[-1]

    @property
    def circumradius(self) -> float:
        return max(curve.circumradius for curve in self.curves)

    def perturbation(self, points) -> np.ndarray:
        """u - a.x at points respecting the evaluation distance rule."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if self.spectral is not None:
            return self.spectral.perturbation(points)
        total = np.zeros(len(points))
        for curve, phi in zip(self.curves, self.densities):
            total += single_layer_eval(curve, self.direction @ phi, points)
        return total

    def potential(self, points) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return points @ self.direction + self.perturbation(points)

    def to_dict(self) -> Dict:
        data = {
            "direction": self.direction.tolist(),
            "provenance": self.provenance,
            "circumradius": self.circumradius,
        }
        data.update(self.metadata)
        return data


def solve_field(config: InclusionConfig, a) -> FieldSolution:
    a = _direction(a)
    if isinstance(config, SimpleInclusion):
        phi = solve_simple_densities(config.curve, config.k)
        return FieldSolution(a, "simple", (config.curve,), (phi,))
    if isinstance(config, CoreShellInclusion):
        phi_core, phi_shell = solve_coreshell_densities(config.core, config.shell, config.profile)
        return FieldSolution(a, "coreshell", (config.core, config.shell), (phi_core, phi_shell),
                             metadata={"profile": config.profile.to_dict()})
    raise InvalidInputError(f"unsupported inclusion configuration {type(config).__name__}")


@dataclass(frozen=True)
class FieldValues:
    u: np.ndarray
    perturbation: np.ndarray
    solution: FieldSolution


def exterior_field(config: InclusionConfig, a, points) -> FieldValues:
    """Total potential and its perturbation at points away from every boundary."""
    solution = solve_field(config, a)
    perturbation = solution.perturbation(points)
    u = np.atleast_2d(np.asarray(points, dtype=float)) @ solution.direction + perturbation
    return FieldValues(u, perturbation, solution)


# ---------------------------------------------------------------------------
# Far field
# ---------------------------------------------------------------------------

def _circle(radius: float, m: int) -> Tuple[np.ndarray, np.ndarray]:
    theta = 2.0 * np.pi * np.arange(m) / m
    return theta, radius * np.column_stack([np.cos(theta), np.sin(theta)])


@dataclass(frozen=True)
class DecayEstimate:
    exponent: Optional[float]
    radii: Tuple[float, float]
    amplitudes: Tuple[float, float]
    below_noise: bool

    def to_dict(self) -> Dict:
        return {
            "exponent": self.exponent,
            "radii": list(self.radii),
            "amplitudes": list(self.amplitudes),
            "below_noise": self.below_noise,
        }


def decay_exponent(solution: FieldSolution, radii: Sequence[float], m: int = 64) -> DecayEstimate:
    """
    p = -log(delta(R2)/delta(R1)) / log(R2/R1), delta(R) = max_directions |u - a.x|.

    Below NOISE_FLOOR at R1 the exponent is meaningless and is reported as None.
    """
    r1, r2 = (float(r) for r in radii)
    if m < MIN_DIRECTIONS:
        raise InvalidInputError(f"decay estimate needs at least {MIN_DIRECTIONS} directions, got {m}")
    if not r2 > r1 > 2.0 * solution.circumradius:
        raise InvalidInputError(
            f"radii must satisfy R2 > R1 > 2 x circumradius = {2.0 * solution.circumradius:.6g}, got ({r1}, {r2})"
        )

    delta1 = float(np.max(np.abs(solution.perturbation(_circle(r1, m)[1]))))
    delta2 = float(np.max(np.abs(solution.perturbation(_circle(r2, m)[1]))))
    if delta1 < NOISE_FLOOR:
        logger.info(f"perturbation {delta1:.3e} at R1 = {r1:g} is below the noise floor")
        return DecayEstimate(None, (r1, r2), (delta1, delta2), True)

    exponent = -math.log(max(delta2, 1e-300) / delta1) / math.log(r2 / r1)
    logger.info(f"decay exponent {exponent:.6f} from R = ({r1:g}, {r2:g})")
    return DecayEstimate(exponent, (r1, r2), (delta1, delta2), False)


def fit_dipole_tensor(config: InclusionConfig, radius: float, m: int = 64) -> np.ndarray:
    """
    Recover M from the far field: u - a.x = -<a, M x>/(2 pi |x|^2) + higher modes.

    The first angular Fourier mode at |x| = R isolates the dipole term, so each
    row a^T M comes from one solve with a = e_l.
    """
    if m < MIN_DIRECTIONS:
        raise InvalidInputError(f"dipole fit needs at least {MIN_DIRECTIONS} directions, got {m}")
    theta, points = _circle(float(radius), m)
    basis = np.column_stack([np.cos(theta), np.sin(theta)])
    rows = []
    for a in np.eye(2):
        perturbation = solve_field(config, a).perturbation(points)
        rows.append(-2.0 * np.pi * radius * (2.0 / m) * (perturbation @ basis))
    return np.array(rows)


# ---------------------------------------------------------------------------
# Grids
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldGrid:
    """Row-major samples; mask = 1 marks cells inside the inclusion or too near a boundary."""

    x: np.ndarray
    y: np.ndarray
    u: np.ndarray
    perturbation: np.ndarray
    mask: np.ndarray

    @property
    def shape(self) -> Tuple[int, int]:
        return self.u.shape

    def max_exterior_perturbation(self) -> float:
        values = self.perturbation[self.mask == 0]
        return float(np.max(np.abs(values))) if values.size else 0.0


def _resolution(resolution) -> Tuple[int, int]:
    nx, ny = (resolution, resolution) if np.isscalar(resolution) else resolution
    nx, ny = int(nx), int(ny)
    if not (1 <= nx <= MAX_GRID_RESOLUTION and 1 <= ny <= MAX_GRID_RESOLUTION):
        raise InvalidInputError(f"grid resolution must lie in [1, {MAX_GRID_RESOLUTION}] per axis, got {(nx, ny)}")
    return nx, ny


def grid_sample(solution: FieldSolution, bbox: Sequence[float], resolution) -> FieldGrid:
    """Sample u and u - a.x on a uniform grid over bbox = (xmin, xmax, ymin, ymax)."""
    xmin, xmax, ymin, ymax = (float(v) for v in bbox)
    if not (xmax >= xmin and ymax >= ymin):
        raise InvalidInputError(f"bounding box {list(bbox)} is empty")
    nx, ny = _resolution(resolution)
    x, y = np.meshgrid(np.linspace(xmin, xmax, nx), np.linspace(ymin, ymax, ny))
    points = np.column_stack([x.ravel(), y.ravel()])

    masked = winding_number(solution.outer_curve, points) > 0.5
    for curve in solution.curves:
        masked |= curve.distance_to(points) <= evaluation_distance(curve)

    u = np.full(len(points), np.nan)
    perturbation = np.full(len(points), np.nan)
    exterior = np.flatnonzero(~masked)
    for start in range(0, len(exterior), GRID_CHUNK):
        chunk = exterior[start:start + GRID_CHUNK]
        perturbation[chunk] = solution.perturbation(points[chunk])
        u[chunk] = points[chunk] @ solution.direction + perturbation[chunk]

    logger.info(f"sampled {nx}x{ny} grid, {len(exterior)} exterior cells")
    return FieldGrid(x, y, u.reshape(ny, nx), perturbation.reshape(ny, nx),
                     masked.astype(int).reshape(ny, nx))


def _format(value: float) -> str:
    return "nan" if math.isnan(value) else CSV_FLOAT_FORMAT.format(value)


def write_grid_csv(grid: FieldGrid, path) -> int:
    """Write x,y,u,pert,mask rows; returns the number of data rows."""
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for x, y, u, pert, mask in zip(grid.x.ravel(), grid.y.ravel(), grid.u.ravel(),
                                       grid.perturbation.ravel(), grid.mask.ravel()):
            writer.writerow([_format(x), _format(y), _format(u), _format(pert), int(mask)])
    return grid.u.size
