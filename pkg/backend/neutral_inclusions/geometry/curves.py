"""
Curve descriptions and their discretization into BoundaryCurve objects.

Every curve is sampled at N equispaced parameters t_k = 2*pi*k/N with
positive orientation, so the periodic trapezoidal rule with weights
|x'(t_k)| * 2*pi/N is spectrally accurate for smooth integrands.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Tuple, Union

import numpy as np

from ..config import MIN_NODES, PROBE_FACTOR
from ..errors import DegenerateCurve, SpecError
from .conformal import ConformalMap

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Curve descriptions
# ---------------------------------------------------------------------------

def _positive(name: str, value: float) -> float:
    value = float(value)
    if not np.isfinite(value) or value <= 0:
        raise DegenerateCurve(f"{name} must be strictly positive, got {value}")
    return value


def _center(value) -> Tuple[float, float]:
    if len(value) != 2:
        raise SpecError(f"center must have two coordinates, got {value!r}")
    return (float(value[0]), float(value[1]))


@dataclass(frozen=True)
class ConformalSpec:
    """Image of |zeta| = dilation under the exterior map."""

    conformal_map: ConformalMap
    dilation: float = 1.0
    kind: str = field(default="conformal", init=False)

    def __post_init__(self):
        object.__setattr__(self, "dilation", _positive("dilation", self.dilation))

    def to_dict(self) -> Dict:
        return {"kind": self.kind, "dilation": self.dilation, **self.conformal_map.to_dict()}


@dataclass(frozen=True)
class PerturbedDiskSpec:
    """
    Polar curve r(theta) = r_i + h(theta) with
    h(theta) = mean + sum_k (cos[k-1] cos k theta + sin[k-1] sin k theta).
    """

    r_i: float
    mean: float = 0.0
    cos: Tuple[float, ...] = ()
    sin: Tuple[float, ...] = ()
    kind: str = field(default="perturbed_disk", init=False)

    def __post_init__(self):
        object.__setattr__(self, "r_i", _positive("r_i", self.r_i))
        object.__setattr__(self, "mean", float(self.mean))
        object.__setattr__(self, "cos", tuple(float(c) for c in self.cos))
        object.__setattr__(self, "sin", tuple(float(s) for s in self.sin))

    def perturbation(self, theta: np.ndarray, derivative: int = 0) -> np.ndarray:
        """h or its first/second derivative at theta."""
        theta = np.asarray(theta, dtype=float)
        values = np.full(theta.shape, self.mean if derivative == 0 else 0.0)
        for k, a_k in enumerate(self.cos, start=1):
            if derivative == 0:
                values = values + a_k * np.cos(k * theta)
            elif derivative == 1:
                values = values - k * a_k * np.sin(k * theta)
            else:
                values = values - k * k * a_k * np.cos(k * theta)
        for k, b_k in enumerate(self.sin, start=1):
            if derivative == 0:
                values = values + b_k * np.sin(k * theta)
            elif derivative == 1:
                values = values + k * b_k * np.cos(k * theta)
            else:
                values = values - k * k * b_k * np.sin(k * theta)
        return values

    def to_dict(self) -> Dict:
        return {"kind": self.kind, "r_i": self.r_i, "mean": self.mean,
                "cos": list(self.cos), "sin": list(self.sin)}


@dataclass(frozen=True)
class EllipseSpec:
    a: float
    b: float
    center: Tuple[float, float] = (0.0, 0.0)
    kind: str = field(default="ellipse", init=False)

    def __post_init__(self):
        object.__setattr__(self, "a", _positive("a", self.a))
        object.__setattr__(self, "b", _positive("b", self.b))
        object.__setattr__(self, "center", _center(self.center))

    def to_dict(self) -> Dict:
        return {"kind": self.kind, "a": self.a, "b": self.b, "center": list(self.center)}


@dataclass(frozen=True)
class CircleSpec:
    r: float
    center: Tuple[float, float] = (0.0, 0.0)
    kind: str = field(default="circle", init=False)

    def __post_init__(self):
        object.__setattr__(self, "r", _positive("r", self.r))
        object.__setattr__(self, "center", _center(self.center))

    def to_dict(self) -> Dict:
        return {"kind": self.kind, "r": self.r, "center": list(self.center)}


@dataclass(frozen=True)
class NeumannOvalSpec:
    """Quartic oval r(theta)^2 = alpha^2 + 4 eps^2 cos^2 theta."""

    alpha: float
    epsilon: float = 0.0
    kind: str = field(default="neumann_oval", init=False)

    def __post_init__(self):
        object.__setattr__(self, "alpha", _positive("alpha", self.alpha))
        epsilon = float(self.epsilon)
        if not np.isfinite(epsilon) or epsilon < 0:
            raise DegenerateCurve(f"epsilon must be nonnegative, got {epsilon}")
        object.__setattr__(self, "epsilon", epsilon)

    @property
    def area(self) -> float:
        return float(np.pi * (self.alpha ** 2 + 2.0 * self.epsilon ** 2))

    def to_dict(self) -> Dict:
        return {"kind": self.kind, "alpha": self.alpha, "epsilon": self.epsilon}


CurveSpec = Union[ConformalSpec, PerturbedDiskSpec, EllipseSpec, CircleSpec, NeumannOvalSpec]


def curve_spec_from_dict(data: Dict) -> CurveSpec:
    """Parse the JSON form of a CurveSpec (discriminated by "kind")."""
    if not isinstance(data, dict) or "kind" not in data:
        raise SpecError("curve spec must be an object with a 'kind' field")
    kind = data["kind"]
    try:
        if kind == "conformal":
            return ConformalSpec(ConformalMap.from_dict(data), data.get("dilation", 1.0))
        if kind == "perturbed_disk":
            return PerturbedDiskSpec(data["r_i"], data.get("mean", 0.0),
                                     tuple(data.get("cos", ())), tuple(data.get("sin", ())))
        if kind == "ellipse":
            return EllipseSpec(data["a"], data["b"], tuple(data.get("center", (0.0, 0.0))))
        if kind == "circle":
            return CircleSpec(data["r"], tuple(data.get("center", (0.0, 0.0))))
        if kind == "neumann_oval":
            return NeumannOvalSpec(data["alpha"], data.get("epsilon", 0.0))
    except KeyError as e:
        raise SpecError(f"curve spec of kind '{kind}' is missing field {e}") from e
    raise SpecError(f"unknown curve kind '{kind}'")


# ---------------------------------------------------------------------------
# Discretized curves
# ---------------------------------------------------------------------------

def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.ascontiguousarray(array, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class BoundaryCurve:
    """Nodes, speeds, outward normals and curvature of a closed curve."""

    t: np.ndarray
    points: np.ndarray
    speed: np.ndarray
    normals: np.ndarray
    curvature: np.ndarray
    closed: bool = True

    def __post_init__(self):
        for name in ("t", "points", "speed", "normals", "curvature"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))

    @property
    def n(self) -> int:
        return len(self.t)

    @property
    def weights(self) -> np.ndarray:
        return self.speed * (2.0 * np.pi / self.n)

    @property
    def perimeter(self) -> float:
        return float(np.sum(self.weights))

    @property
    def tangents(self) -> np.ndarray:
        return np.column_stack([-self.normals[:, 1], self.normals[:, 0]])

    @property
    def centroid(self) -> np.ndarray:
        """Area centroid, from int_D x dA = oint (x^2/2) nu_x dS."""
        w = self.weights
        x, y = self.points[:, 0], self.points[:, 1]
        area = curve_area(self)
        cx = 0.5 * np.sum(w * x * x * self.normals[:, 0]) / area
        cy = 0.5 * np.sum(w * y * y * self.normals[:, 1]) / area
        return np.array([cx, cy])

    @property
    def circumradius(self) -> float:
        """Largest node distance from the origin."""
        return float(np.max(np.hypot(self.points[:, 0], self.points[:, 1])))

    @property
    def max_node_spacing(self) -> float:
        gaps = np.diff(np.vstack([self.points, self.points[:1]]), axis=0)
        return float(np.max(np.hypot(gaps[:, 0], gaps[:, 1])))

    def distance_to(self, points: np.ndarray) -> np.ndarray:
        """Distance from each point to the nearest node."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        dx = points[:, None, 0] - self.points[None, :, 0]
        dy = points[:, None, 1] - self.points[None, :, 1]
        return np.min(np.hypot(dx, dy), axis=1)

    def rotated(self, angle: float) -> "BoundaryCurve":
        c, s = np.cos(angle), np.sin(angle)
        rotation = np.array([[c, -s], [s, c]])
        return BoundaryCurve(self.t, self.points @ rotation.T, self.speed,
                             self.normals @ rotation.T, self.curvature, self.closed)

    def scaled(self, factor: float) -> "BoundaryCurve":
        factor = _positive("scale factor", factor)
        return BoundaryCurve(self.t, self.points * factor, self.speed * factor,
                             self.normals, self.curvature / factor, self.closed)


def _from_complex(t: np.ndarray, z: np.ndarray, dz: np.ndarray, ddz: np.ndarray) -> BoundaryCurve:
    speed = np.abs(dz)
    if np.min(speed) <= 0:
        raise DegenerateCurve("parametrization has zero speed at a node")
    tangent = dz / speed
    points = np.column_stack([z.real, z.imag])
    normals = np.column_stack([tangent.imag, -tangent.real])
    curvature = np.imag(np.conj(dz) * ddz) / speed ** 3
    return BoundaryCurve(t, points, speed, normals, curvature)


def _polar(t: np.ndarray, rho: np.ndarray, drho: np.ndarray, ddrho: np.ndarray,
           center: Tuple[float, float]) -> BoundaryCurve:
    e = np.exp(1j * t)
    z = rho * e + complex(*center)
    dz = (drho + 1j * rho) * e
    ddz = (ddrho + 2j * drho - rho) * e
    return _from_complex(t, z, dz, ddz)


def check_simple(curve: BoundaryCurve) -> None:
    """
    Reject polygons whose nodes coincide or whose non-adjacent segments cross,
    and clockwise curves.
    """
    n = curve.n
    p = curve.points
    dx = p[None, :, 0] - p[:, None, 0]
    dy = p[None, :, 1] - p[:, None, 1]
    dist = np.hypot(dx, dy)
    dist[np.arange(n), np.arange(n)] = np.inf
    if np.min(dist) <= 0:
        raise DegenerateCurve("curve is not simple: two distinct nodes coincide")

    # orientation of the start and end of segment j relative to segment i
    d = np.roll(p, -1, axis=0) - p
    start = d[:, None, 0] * dy - d[:, None, 1] * dx
    end = start + d[:, None, 0] * d[None, :, 1] - d[:, None, 1] * d[None, :, 0]
    crossing = (start * end < 0) & (start.T * end.T < 0)
    gap = np.abs(np.arange(n)[:, None] - np.arange(n)[None, :])
    crossing &= (gap > 1) & (gap < n - 1)
    if np.any(crossing):
        i, j = np.argwhere(crossing)[0]
        raise DegenerateCurve(f"curve is not simple: segments {i} and {j} cross")
    if curve_area(curve) <= 0:
        raise DegenerateCurve("curve is not positively oriented")


def build_curve(spec: CurveSpec, n: int) -> BoundaryCurve:
    """Discretize a curve description at n equispaced parameters."""
    if n < MIN_NODES or n % 2:
        raise DegenerateCurve(f"node count must be even and >= {MIN_NODES}, got {n}")
    t = 2.0 * np.pi * np.arange(n) / n

    if isinstance(spec, ConformalSpec):
        phi, r = spec.conformal_map, spec.dilation
        phi.check_injective(PROBE_FACTOR * n, r)
        zeta = r * np.exp(1j * t)
        dzeta = 1j * zeta
        curve = _from_complex(
            t,
            phi(zeta),
            phi.derivative(zeta) * dzeta,
            phi.second_derivative(zeta) * dzeta ** 2 - phi.derivative(zeta) * zeta,
        )
    elif isinstance(spec, PerturbedDiskSpec):
        probe = 2.0 * np.pi * np.arange(PROBE_FACTOR * n) / (PROBE_FACTOR * n)
        r_min = float(np.min(spec.r_i + spec.perturbation(probe)))
        if r_min <= 0:
            raise DegenerateCurve(f"perturbed disk radius reaches {r_min:.3e} <= 0")
        curve = _polar(t, spec.r_i + spec.perturbation(t), spec.perturbation(t, 1),
                       spec.perturbation(t, 2), (0.0, 0.0))
    elif isinstance(spec, CircleSpec):
        zeros = np.zeros(n)
        curve = _polar(t, np.full(n, spec.r), zeros, zeros, spec.center)
    elif isinstance(spec, EllipseSpec):
        c = complex(*spec.center)
        cos_t, sin_t = np.cos(t), np.sin(t)
        curve = _from_complex(
            t,
            spec.a * cos_t + 1j * spec.b * sin_t + c,
            -spec.a * sin_t + 1j * spec.b * cos_t,
            -spec.a * cos_t - 1j * spec.b * sin_t,
        )
    elif isinstance(spec, NeumannOvalSpec):
        eps2 = spec.epsilon ** 2
        q = spec.alpha ** 2 + 2.0 * eps2 * (1.0 + np.cos(2.0 * t))
        dq = -4.0 * eps2 * np.sin(2.0 * t)
        ddq = -8.0 * eps2 * np.cos(2.0 * t)
        rho = np.sqrt(q)
        drho = dq / (2.0 * rho)
        ddrho = ddq / (2.0 * rho) - dq ** 2 / (4.0 * rho ** 3)
        curve = _polar(t, rho, drho, ddrho, (0.0, 0.0))
    else:
        raise SpecError(f"unsupported curve spec {type(spec).__name__}")

    check_simple(curve)
    logger.debug(f"Built {spec.kind} curve with {n} nodes, perimeter {curve.perimeter:.6g}")
    return curve


def curve_area(curve: BoundaryCurve) -> float:
    """Green's theorem: |D| = 1/2 oint x . nu dS."""
    x, y = curve.points[:, 0], curve.points[:, 1]
    return float(0.5 * np.sum(curve.weights * (x * curve.normals[:, 0] + y * curve.normals[:, 1])))
