"""
Newtonian potentials and quadrature identities.

Newtonian potentials are normalized by the volume: N_D(x) = (1/|D|) int_D Gamma(x - y) dy
with Gamma = log|x|/(2 pi) in 2-D and -1/(4 pi |x|) in 3-D.

Quadrature residuals compare integrals of harmonic test functions scaled by
R^-n (R the circumradius of the outer domain) and divided by the domain volume.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import roots_chebyu, roots_legendre

from ..config import DEFAULT_NODES
from ..ellipsoids.potentials import EllipsoidPair, ellipsoid_kernels, ellipsoidal_coordinate
from ..errors import DegenerateFoci, InvalidInputError
from ..geometry.curves import BoundaryCurve, EllipseSpec, NeumannOvalSpec, build_curve, curve_area
from ..layer_potentials.operators import check_evaluation_points, winding_number

logger = logging.getLogger(__name__)

MAX_DEGREE = 6


# ---------------------------------------------------------------------------
# Newtonian potentials
# ---------------------------------------------------------------------------

def newtonian_potential_2d(curve: BoundaryCurve, x) -> np.ndarray:
    """
    N_D at points off the boundary, from the flux form

        int_D Gamma(x - y) dy = (1/4pi) oint (y - x).nu(y) (log|y - x| - 1/2) dS(y).
    """
    points = check_evaluation_points(curve, x)
    dx = curve.points[None, :, 0] - points[:, None, 0]
    dy = curve.points[None, :, 1] - points[:, None, 1]
    flux = dx * curve.normals[None, :, 0] + dy * curve.normals[None, :, 1]
    integrand = flux * (0.5 * np.log(dx * dx + dy * dy) - 0.5)
    return integrand @ curve.weights / (4.0 * np.pi * curve_area(curve))


def _semi_axes(a: Sequence[float]) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.shape != (3,) or not np.all(np.isfinite(a)) or np.any(a <= 0):
        raise InvalidInputError(f"semi-axes must be three positive numbers, got {a.tolist()}")
    return a


def ellipsoid_potential_3d(a: Sequence[float], x) -> np.ndarray:
    """
    N_E = -U / (4 pi |E|) with the ellipsoid's potential

        U(x) = pi a1 a2 a3 int_lambda^inf (1 - sum x_j^2/(a_j^2 + s)) g(s)^(-1/2) ds
             = pi a1 a2 a3 (I(lambda) - sum phi_j(lambda) x_j^2),

    lambda the confocal coordinate of x (0 inside E).
    """
    a = _semi_axes(a)
    a2 = a * a
    points = np.atleast_2d(np.asarray(x, dtype=float))
    inside = np.sum(points * points / a2, axis=1) <= 1.0
    lam = np.zeros(len(points))
    if np.any(~inside):
        lam[~inside] = ellipsoidal_coordinate(points[~inside], a2)
    phi, total = ellipsoid_kernels(lam, a2)
    potential = np.pi * np.prod(a) * (total - np.sum(phi * points * points, axis=1))
    return -potential / (4.0 * np.pi * (4.0 * np.pi / 3.0) * np.prod(a))


@dataclass(frozen=True)
class NewtonianFormulationReport:
    outside_max: float
    inside_fit_residual: float
    fitted_alpha: Tuple[float, float, float]
    alpha: Tuple[float, float, float]
    linear_term_norm: float
    cross_term_norm: float

    def to_dict(self) -> Dict:
        return {
            "outside_max": self.outside_max,
            "inside_quadratic_fit_residual": self.inside_fit_residual,
            "fitted_alpha": list(self.fitted_alpha),
            "alpha": list(self.alpha),
            "linear_term_norm": self.linear_term_norm,
            "cross_term_norm": self.cross_term_norm,
        }


def _random_directions(rng: np.random.Generator, n: int) -> np.ndarray:
    directions = rng.normal(size=(n, 3))
    return directions / np.linalg.norm(directions, axis=1)[:, None]


def check_newtonian_formulation(c2: Sequence[float], rho0: float, n_exterior: int = 200,
                                n_interior: int = 200, shell_axes: Optional[Sequence[float]] = None,
                                seed: int = 0) -> NewtonianFormulationReport:
    """
    Test w = |Omega| (N_Omega - N_D) for a core and its confocal shell.

    w vanishes outside Omega and is a quadratic sum alpha_j x_j^2 + const in D.
    Passing shell_axes replaces the confocal shell (a negative control).
    Lengths in the report are scaled by the largest shell semi-axis.
    """
    pair = EllipsoidPair(tuple(c2), rho0)
    core_axes = pair.core_semi_axes
    outer_axes = pair.shell_semi_axes if shell_axes is None else _semi_axes(shell_axes)
    if np.any(outer_axes <= core_axes):
        raise InvalidInputError("shell semi-axes must exceed the core semi-axes")
    shell_volume = 4.0 * np.pi / 3.0 * float(np.prod(outer_axes))
    scale = float(np.max(outer_axes))
    rng = np.random.default_rng(seed)

    def w(points: np.ndarray) -> np.ndarray:
        return shell_volume * (ellipsoid_potential_3d(outer_axes, points) - ellipsoid_potential_3d(core_axes, points))

    exterior = outer_axes * _random_directions(rng, n_exterior) * rng.uniform(1.1, 3.0, size=(n_exterior, 1))
    outside_max = float(np.max(np.abs(w(exterior)))) / scale ** 2

    interior = core_axes * _random_directions(rng, n_interior) * rng.uniform(0.0, 0.95, size=(n_interior, 1))
    x, y, z = (interior[:, j] / scale for j in range(3))
    design = np.column_stack([np.ones(n_interior), x, y, z, x * x, y * y, z * z, x * y, x * z, y * z])
    values = w(interior) / scale ** 2
    coefficients, *_ = np.linalg.lstsq(design, values, rcond=None)
    fit_residual = float(np.max(np.abs(design @ coefficients - values)))

    report = NewtonianFormulationReport(
        outside_max=outside_max,
        inside_fit_residual=fit_residual,
        fitted_alpha=tuple(float(c) for c in coefficients[4:7]),
        alpha=pair.alpha,
        linear_term_norm=float(np.linalg.norm(coefficients[1:4])),
        cross_term_norm=float(np.linalg.norm(coefficients[7:10])),
    )
    logger.info(f"Newtonian formulation: outside {outside_max:.3e}, fit residual {fit_residual:.3e}")
    return report


# ---------------------------------------------------------------------------
# Harmonic test functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HarmonicTestFunction:
    """
    Harmonic polynomial of degree n.

    kind "re"/"im" is Re or Im of (x_j + i x_k)^n; "lift_re"/"lift_im" is
    x_l times Re or Im of (x_j + i x_k)^(n-1). axes = (j, k) or (j, k, l).
    """

    degree: int
    kind: str
    dimension: int = 2
    axes: Tuple[int, ...] = (0, 1)

    @property
    def label(self) -> str:
        j, k = self.axes[:2]
        base = f"(x{j + 1}+ix{k + 1})"
        if self.kind.startswith("lift"):
            part = "Re" if self.kind == "lift_re" else "Im"
            return f"x{self.axes[2] + 1}*{part}{base}^{self.degree - 1}"
        return f"{'Re' if self.kind == 're' else 'Im'}{base}^{self.degree}"

    def _complex(self, points: np.ndarray, power: int) -> np.ndarray:
        j, k = self.axes[:2]
        return (points[:, j] + 1j * points[:, k]) ** power

    def __call__(self, points) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if self.kind == "re":
            return self._complex(points, self.degree).real
        if self.kind == "im":
            return self._complex(points, self.degree).imag
        lifted = self._complex(points, self.degree - 1)
        part = lifted.real if self.kind == "lift_re" else lifted.imag
        return points[:, self.axes[2]] * part

    def area_integral(self, curve: BoundaryCurve) -> float:
        """int_D u dA = oint F nu_x dS with dF/dx = u (2-D kinds only)."""
        if self.dimension != 2:
            raise InvalidInputError("area integrals over curves need a 2-D test function")
        z = curve.points[:, 0] + 1j * curve.points[:, 1]
        antiderivative = z ** (self.degree + 1) / (self.degree + 1)
        values = antiderivative.real if self.kind == "re" else antiderivative.imag
        return float(np.sum(curve.weights * values * curve.normals[:, 0]))


def harmonic_catalog(dimension: int, max_degree: int = MAX_DEGREE) -> List[HarmonicTestFunction]:
    if not 0 <= max_degree <= MAX_DEGREE:
        raise InvalidInputError(f"test degree must lie in [0, {MAX_DEGREE}], got {max_degree}")
    catalog = [HarmonicTestFunction(0, "re", dimension)]
    if dimension == 2:
        for n in range(1, max_degree + 1):
            catalog += [HarmonicTestFunction(n, "re"), HarmonicTestFunction(n, "im")]
        return catalog
    if dimension != 3:
        raise InvalidInputError(f"dimension must be 2 or 3, got {dimension}")
    for j, k, l in ((0, 1, 2), (1, 2, 0), (0, 2, 1)):
        for n in range(1, max_degree + 1):
            catalog += [HarmonicTestFunction(n, "re", 3, (j, k)), HarmonicTestFunction(n, "im", 3, (j, k))]
            catalog += [HarmonicTestFunction(n, "lift_re", 3, (j, k, l))]
            if n > 1:
                catalog += [HarmonicTestFunction(n, "lift_im", 3, (j, k, l))]
    return catalog


def _ball_rule(n_radial: int = 10, n_polar: int = 10, n_azimuth: int = 24) -> Tuple[np.ndarray, np.ndarray]:
    """Product rule on the unit ball, exact for polynomials of degree < 2 min(n_radial, n_polar)."""
    t, wt = roots_legendre(n_radial)
    r, wr = 0.5 * (t + 1.0), 0.5 * wt * (0.5 * (t + 1.0)) ** 2
    mu, wmu = roots_legendre(n_polar)
    phi = 2.0 * np.pi * np.arange(n_azimuth) / n_azimuth
    R, M, P = np.meshgrid(r, mu, phi, indexing="ij")
    S = np.sqrt(1.0 - M * M)
    points = np.column_stack([(R * S * np.cos(P)).ravel(), (R * S * np.sin(P)).ravel(), (R * M).ravel()])
    weights = (wr[:, None, None] * wmu[None, :, None] * np.full(n_azimuth, 2.0 * np.pi / n_azimuth)).ravel()
    return points, weights


def _ellipsoid_integral(axes: np.ndarray, u: HarmonicTestFunction) -> float:
    points, weights = _ball_rule()
    return float(np.prod(axes) * np.sum(weights * u(points * axes)))


# ---------------------------------------------------------------------------
# Identities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadratureReport:
    name: str
    residual: float
    n_nodes: int
    parameters: Dict = field(default_factory=dict)
    residuals: List[Dict] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {
            "name": self.name,
            "residual": self.residual,
            "n_nodes": self.n_nodes,
            "parameters": self.parameters,
            "residuals": self.residuals,
        }


Region = Union[BoundaryCurve, Sequence[float]]


def _mean(region: Region, u: HarmonicTestFunction) -> float:
    if isinstance(region, BoundaryCurve):
        return u.area_integral(region) / curve_area(region)
    axes = _semi_axes(region)
    return _ellipsoid_integral(axes, u) / (4.0 * np.pi / 3.0 * float(np.prod(axes)))


def mean_value_identity(inner: Region, outer: Region, degree: int = MAX_DEGREE) -> QuadratureReport:
    """
    Max over harmonic u of |mean_Omega u - mean_D u| with u scaled by R^-n.

    Regions are both curves (2-D) or both centered ellipsoid semi-axes (3-D).
    """
    if isinstance(inner, BoundaryCurve) != isinstance(outer, BoundaryCurve):
        raise InvalidInputError("mean value identity needs two curves or two ellipsoids")
    if isinstance(outer, BoundaryCurve):
        if np.any(winding_number(outer, inner.points) < 0.5):
            raise InvalidInputError("inner curve is not contained in the outer curve")
        dimension, radius, n_nodes = 2, outer.circumradius, outer.n
    else:
        if np.any(_semi_axes(inner) >= _semi_axes(outer)):
            raise InvalidInputError("inner ellipsoid is not contained in the outer ellipsoid")
        dimension, radius, n_nodes = 3, float(np.max(outer)), _ball_rule()[1].size

    residuals = []
    for u in harmonic_catalog(dimension, degree):
        scale = radius ** u.degree
        residuals.append({"test": u.label, "residual": abs(_mean(outer, u) - _mean(inner, u)) / scale})
    worst = max(r["residual"] for r in residuals)
    logger.info(f"mean value identity: max residual {worst:.3e} over {len(residuals)} test functions")
    return QuadratureReport("mean_value", worst, n_nodes, {"dimension": dimension}, residuals)


def _focal_rule(focal: np.ndarray, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of int_F u sqrt(1 - sum x_i^2/c_i^2) over the focal segment or ellipse."""
    if focal.size == 1:
        t, w = roots_chebyu(n)
        return np.column_stack([focal[0] * t, np.zeros(n)]), focal[0] * w
    t, wt = roots_legendre(n)
    s = 0.25 * np.pi * (t + 1.0)
    rho = np.sin(s)
    radial = 0.25 * np.pi * wt * np.cos(s) ** 2 * rho
    phi = 2.0 * np.pi * np.arange(2 * n) / (2 * n)
    R, P = np.meshgrid(rho, phi, indexing="ij")
    points = np.column_stack([(focal[0] * R * np.cos(P)).ravel(), (focal[1] * R * np.sin(P)).ravel(),
                              np.zeros(R.size)])
    weights = (radial[:, None] * np.full(2 * n, np.pi / n)).ravel() * focal[0] * focal[1]
    return points, weights


def focal_ellipse_identity(axes: Sequence[float], degree: int = MAX_DEGREE, n_nodes: int = DEFAULT_NODES,
                           focal_nodes: int = 32) -> QuadratureReport:
    """
    int_E u = K int_F u(x) sqrt(1 - sum x_i^2/c_i^2) dx for harmonic u,

    F the focal segment (d=2) or focal ellipse (d=3) with c_i^2 = a_i^2 - a_d^2 and
    K = 2 a_d prod_{i<d} a_i / c_i. The coefficient without the factor a_d is
    reported alongside as printed_residual.
    """
    a = np.asarray(axes, dtype=float)
    d = a.size
    if d not in (2, 3) or not np.all(np.isfinite(a)) or np.any(a <= 0):
        raise InvalidInputError(f"focal identity needs 2 or 3 positive semi-axes, got {a.tolist()}")
    if np.any(np.diff(a) > 0):
        raise InvalidInputError(f"semi-axes must be ordered a1 >= ... >= ad, got {a.tolist()}")
    if a[d - 2] == a[d - 1]:
        raise DegenerateFoci(f"a_(d-1) = a_d = {a[-1]:g}: the focal set degenerates")

    focal = np.sqrt(a[:-1] ** 2 - a[-1] ** 2)
    coefficient = 2.0 * a[-1] * float(np.prod(a[:-1] / focal))
    printed = coefficient / a[-1]
    nodes, weights = _focal_rule(focal, focal_nodes)
    if d == 2:
        nodes = nodes[:, :2]
        curve = build_curve(EllipseSpec(a[0], a[1]), n_nodes)
        volume = float(np.pi * a[0] * a[1])
    else:
        volume = float(4.0 * np.pi / 3.0 * np.prod(a))

    residuals = []
    worst_printed = 0.0
    for u in harmonic_catalog(d, degree):
        scale = a[0] ** u.degree
        lhs = (u.area_integral(curve) if d == 2 else _ellipsoid_integral(a, u)) / scale
        focal_integral = float(np.sum(weights * u(nodes))) / scale
        residual = abs(lhs - coefficient * focal_integral) / volume
        printed_residual = abs(lhs - printed * focal_integral) / volume
        worst_printed = max(worst_printed, printed_residual)
        residuals.append({"test": u.label, "residual": residual, "printed_residual": printed_residual,
                          "lhs": lhs, "rhs": coefficient * focal_integral})

    worst = max(r["residual"] for r in residuals)
    parameters = {"dimension": d, "axes": a.tolist(), "focal_axes": focal.tolist(),
                  "coefficient": coefficient, "printed_coefficient": printed,
                  "printed_residual": worst_printed}
    logger.info(f"focal identity (d={d}): residual {worst:.3e}, printed coefficient {worst_printed:.3e}")
    return QuadratureReport("focal_ellipse", worst, int(weights.size), parameters, residuals)


def neumann_oval_identity(alpha: float, epsilon: float, degree: int = MAX_DEGREE,
                          n_nodes: int = DEFAULT_NODES) -> QuadratureReport:
    """
    int_Omega u = (|Omega|/2)(u(p, 0) + u(-p, 0)) on the oval r^2 = alpha^2 + 4 eps^2 cos^2 theta.

    p comes from matching the moment of x^2 - y^2; its closed form is eps.
    """
    spec = NeumannOvalSpec(alpha, epsilon)
    if spec.epsilon == 0:
        raise InvalidInputError("epsilon must be positive for a two-point quadrature")
    curve = build_curve(spec, n_nodes)
    area = curve_area(curve)

    moment = HarmonicTestFunction(2, "re").area_integral(curve)
    if moment <= 0:
        raise InvalidInputError(f"second moment {moment:.3e} is not positive; no real foci")
    p = math.sqrt(moment / area)
    foci = np.array([[p, 0.0], [-p, 0.0]])
    weight = area / 2.0
    radius = curve.circumradius

    residuals = []
    for u in harmonic_catalog(2, degree):
        scale = radius ** u.degree
        lhs = u.area_integral(curve)
        rhs = weight * float(np.sum(u(foci)))
        residuals.append({"test": u.label, "residual": abs(lhs - rhs) / (scale * area)})

    worst = max(r["residual"] for r in residuals)
    parameters = {"alpha": spec.alpha, "epsilon": spec.epsilon, "area": area, "weight": weight,
                  "foci": foci.tolist(), "p": p, "p_closed_form": spec.epsilon}
    logger.info(f"Neumann oval: p = {p:.12g}, residual {worst:.3e}")
    return QuadratureReport("neumann_oval", worst, n_nodes, parameters, residuals)
