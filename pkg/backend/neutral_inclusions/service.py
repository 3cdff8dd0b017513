"""
Neutral Inclusions Service

High-level commands that turn a problem spec (a parsed JSON object) into a
JSON-ready result dict. Every command returns {'success': True, 'result': ...}
or {'success': False, 'error': ..., 'error_kind': 'validation' | 'numerical'}.
"""

import logging
import math
from typing import Callable, Dict, Optional, Union

import numpy as np

from .config import DEFAULT_MODES, DEFAULT_NODES, DEFAULT_TOL, NEWTON_MAX_ITER
from .ellipsoids.potentials import BallPair, odp_residual, odp_solution, shell_pair_from_dict
from .errors import NeutralInclusionError, NumericalFailure, SpecError
from .fields.exterior import (
    CoreShellInclusion,
    InclusionConfig,
    SimpleInclusion,
    decay_exponent,
    grid_sample,
    solve_field,
    write_grid_csv,
)
from .fields.spectral import ImperfectInclusion, far_field_coefficients, imperfect_field
from .geometry.conformal import ConformalMap
from .geometry.curves import (
    ConformalSpec,
    PerturbedDiskSpec,
    build_curve,
    curve_spec_from_dict,
)
from .neutrality.bonding import BondingParameter, beta_weakly_neutral, refine_weakly_neutral_beta
from .neutrality.coatings import construct_coating_bD0, find_coating_perturbed_disk
from .neutrality.conditions import beta_disk, confocal_matrix_conductivity, neutral_matrix_conductivity, solve_lc_disk
from .polarization.profile import ConductivityProfile, _conductivity, format_conductivity
from .polarization.tensors import hs_check, pt_coreshell, pt_simple
from .quadrature.domains import (
    check_newtonian_formulation,
    focal_ellipse_identity,
    mean_value_identity,
    neumann_oval_identity,
)

logger = logging.getLogger(__name__)

COMMANDS = ("pt", "coat", "beta", "lc-disk", "field", "decay", "odp", "quad", "hs", "newton-coat")


def _require(spec: Dict, key: str):
    if key not in spec:
        raise SpecError(f"problem spec is missing field '{key}'")
    return spec[key]


def _to_json(value):
    """Recursively convert numpy scalars/arrays and non-finite floats to JSON-safe values."""
    if isinstance(value, dict):
        return {str(k): _to_json(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_json(v) for v in value]
    if isinstance(value, np.ndarray):
        return _to_json(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, complex):
        return [_to_json(value.real), _to_json(value.imag)]
    return value


class NeutralInclusionService:
    """Service class for neutral inclusion computations."""

    def __init__(self, default_nodes: int = DEFAULT_NODES, default_modes: int = DEFAULT_MODES):
        self.default_nodes = int(default_nodes)
        self.default_modes = int(default_modes)
        self._handlers: Dict[str, Callable[..., Dict]] = {
            "pt": self.polarization_tensor,
            "hs": self.hashin_shtrikman,
            "coat": self.coating,
            "newton-coat": self.newton_coating,
            "beta": self.bonding_parameter,
            "lc-disk": self.lc_disk,
            "field": self.field,
            "decay": self.decay,
            "odp": self.shell_problem,
            "quad": self.quadrature,
        }

    # ------------------------------------------------------------------
    # Dispatch
    # ------------------------------------------------------------------

    def run(self, command: str, spec: Dict, grid_path: Optional[str] = None) -> Dict:
        """Run one command and wrap its result or its failure."""
        try:
            if command not in self._handlers:
                raise SpecError(f"unknown command '{command}'; expected one of {', '.join(COMMANDS)}")
            if not isinstance(spec, dict):
                raise SpecError("problem spec must be a JSON object")
            if command == "field":
                result = self.field(spec, grid_path)
            else:
                result = self._handlers[command](spec)
            logger.info(f"✅ {command} completed")
            return {"success": True, "command": command, "result": _to_json(result)}
        except NeutralInclusionError as e:
            kind = "numerical" if isinstance(e, NumericalFailure) else "validation"
            logger.error(f"❌ {command} failed ({type(e).__name__}): {e}")
            return {"success": False, "command": command, "error": str(e), "error_type": type(e).__name__,
                    "error_kind": kind}
        except (KeyError, TypeError, ValueError) as e:
            logger.error(f"❌ {command} rejected malformed input: {e}")
            return {"success": False, "command": command, "error": str(e), "error_type": "SpecError",
                    "error_kind": "validation"}

    # ------------------------------------------------------------------
    # Spec parsing
    # ------------------------------------------------------------------

    def _nodes(self, spec: Dict) -> int:
        return int(spec.get("nodes", self.default_nodes))

    def _modes(self, spec: Dict) -> int:
        return int(spec.get("modes", self.default_modes))

    @staticmethod
    def _map(spec: Dict) -> ConformalMap:
        data = _require(spec, "map")
        if isinstance(data, dict):
            return ConformalMap.from_dict(data)
        return ConformalMap(tuple(data))

    def _inclusion(self, spec: Dict) -> Union[InclusionConfig, ImperfectInclusion]:
        """Build a field configuration from an 'inclusion' object."""
        data = _require(spec, "inclusion")
        n = self._nodes(spec)
        kind = data.get("type", "simple")
        if kind == "simple":
            return SimpleInclusion(build_curve(curve_spec_from_dict(_require(data, "curve")), n),
                                   _conductivity("k", _require(data, "k"), allow_inf=True))
        if kind == "coreshell":
            return CoreShellInclusion(build_curve(curve_spec_from_dict(_require(data, "core")), n),
                                      build_curve(curve_spec_from_dict(_require(data, "shell")), n),
                                      ConductivityProfile.from_dict(_require(data, "profile")))
        if kind == "coating":
            coating = construct_coating_bD0(self._map(data), _require(data, "sigma_s"))
            core, shell = coating.curves(n)
            return CoreShellInclusion(core, shell, coating.profile)
        if kind == "uncoated":
            return SimpleInclusion(build_curve(ConformalSpec(self._map(data), 1.0), n), math.inf)
        if kind == "imperfect":
            conformal_map = self._map(data)
            n_modes = self._modes(spec)
            return ImperfectInclusion(conformal_map, self._bonding(data, conformal_map, n_modes), n_modes)
        raise SpecError(f"unknown inclusion type '{kind}'")

    def _bonding(self, data: Dict, conformal_map: ConformalMap, n_modes: int):
        beta = data.get("beta", "weakly_neutral")
        if beta == "weakly_neutral":
            return beta_weakly_neutral(conformal_map)
        if beta == "refined":
            return refine_weakly_neutral_beta(conformal_map, n_modes)
        if isinstance(beta, dict):
            return BondingParameter.from_profile(conformal_map, (beta["A"], beta.get("B", 0.0), beta.get("C", 0.0)))
        return BondingParameter.constant(conformal_map, float(beta))

    def _field_solution(self, spec: Dict, a):
        config = self._inclusion(spec)
        if isinstance(config, ImperfectInclusion):
            return imperfect_field(config.conformal_map, config.beta, a, config.n_modes, self._nodes(spec))
        return solve_field(config, a)

    # ------------------------------------------------------------------
    # Commands
    # ------------------------------------------------------------------

    def polarization_tensor(self, spec: Dict) -> Dict:
        """pt: simple inclusion {curve, k} or core-shell {core, shell, profile}."""
        n = self._nodes(spec)
        if "core" in spec:
            core = build_curve(curve_spec_from_dict(spec["core"]), n)
            shell = build_curve(curve_spec_from_dict(_require(spec, "shell")), n)
            tensor = pt_coreshell(core, shell, ConductivityProfile.from_dict(_require(spec, "profile")))
            result = tensor.to_dict()
            result["relative_norm"] = tensor.norm / tensor.shell_area
        else:
            curve = build_curve(curve_spec_from_dict(_require(spec, "curve")), n)
            tensor = pt_simple(curve, _conductivity("k", _require(spec, "k"), allow_inf=True))
            result = tensor.to_dict()
        result["nodes"] = n
        return result

    def hashin_shtrikman(self, spec: Dict) -> Dict:
        """hs: Hashin-Shtrikman slacks for a simple inclusion {curve, k}."""
        n = self._nodes(spec)
        curve = build_curve(curve_spec_from_dict(_require(spec, "curve")), n)
        k = _conductivity("k", _require(spec, "k"), allow_inf=True)
        tensor = pt_simple(curve, k)
        report = hs_check(tensor, k, tensor.core_area)
        return {"tensor": tensor.to_dict(), "hs": report.to_dict(), "nodes": n}

    def coating(self, spec: Dict) -> Dict:
        """coat: b_D = 0 coating {map, sigma_s}, verified by a core-shell solve unless verify is false."""
        coating = construct_coating_bD0(self._map(spec), _require(spec, "sigma_s"))
        result = coating.to_dict()
        if spec.get("verify", True):
            n = self._nodes(spec)
            core, shell = coating.curves(n)
            tensor = pt_coreshell(core, shell, coating.profile)
            result["verification"] = {
                "nodes": n,
                "matrix": tensor.matrix.tolist(),
                "relative_norm": tensor.norm / tensor.shell_area,
                "shell_area": tensor.shell_area,
            }
        return result

    def newton_coating(self, spec: Dict) -> Dict:
        """newton-coat: coating of a perturbed disk {core, sigma_c, sigma_s, sigma_m | f}."""
        core = curve_spec_from_dict(_require(spec, "core"))
        if not isinstance(core, PerturbedDiskSpec):
            raise SpecError("newton-coat needs a perturbed_disk core")
        sigma_c, sigma_s = _require(spec, "sigma_c"), _require(spec, "sigma_s")
        if "sigma_m" in spec:
            sigma_m = spec["sigma_m"]
        else:
            sigma_m = neutral_matrix_conductivity(sigma_c, sigma_s, _require(spec, "f"), 2)
        result = find_coating_perturbed_disk(
            core, sigma_c, sigma_s, sigma_m,
            n_nodes=self._nodes(spec),
            tol=float(spec.get("tol", DEFAULT_TOL)),
            max_iter=int(spec.get("max_iter", NEWTON_MAX_ITER)),
        )
        return {**result.to_dict(), "sigma_m": sigma_m}

    def bonding_parameter(self, spec: Dict) -> Dict:
        """beta: weakly neutral bonding {map, refine} or the disk value {r, sigma_c, sigma_m}."""
        if "map" not in spec:
            r = _require(spec, "r")
            return {"beta": beta_disk(r, _require(spec, "sigma_c"), _require(spec, "sigma_m"))}

        conformal_map = self._map(spec)
        n_modes = self._modes(spec)
        if spec.get("refine", False):
            beta = refine_weakly_neutral_beta(conformal_map, n_modes)
        else:
            beta = beta_weakly_neutral(conformal_map)
        result = {"bonding": beta.to_dict(), "b_D": abs(conformal_map.b_D)}
        if spec.get("verify", True):
            result["far_field"] = far_field_coefficients(conformal_map, beta, n_modes).to_dict()
        return result

    def lc_disk(self, spec: Dict) -> Dict:
        """lc-disk: {r, sigma_c, sigma_m, beta}; beta defaults to the neutral value."""
        r, sigma_c, sigma_m = _require(spec, "r"), _require(spec, "sigma_c"), _require(spec, "sigma_m")
        beta = spec.get("beta")
        if beta is None:
            beta = beta_disk(r, sigma_c, sigma_m)
        elif isinstance(beta, str) and beta.strip().lower() == "inf":
            beta = math.inf
        solution = solve_lc_disk(r, sigma_c, sigma_m, beta)
        return {**solution.to_dict(), "beta": format_conductivity(float(beta)),
                "polarization": solution.polarization(float(r))}

    def field(self, spec: Dict, grid_path: Optional[str] = None) -> Dict:
        """field: potential at 'points' and optionally a grid written to grid_path."""
        solution = self._field_solution(spec, spec.get("a", [1.0, 0.0]))
        result = solution.to_dict()
        points = spec.get("points", [])
        if points:
            perturbation = solution.perturbation(points)
            result["points"] = [
                {"x": p[0], "y": p[1], "u": float(np.dot(p, solution.direction) + q), "pert": float(q)}
                for p, q in zip(np.asarray(points, dtype=float).tolist(), perturbation)
            ]
        grid_spec = spec.get("grid")
        if grid_path is not None or grid_spec is not None:
            grid_spec = grid_spec or {}
            radius = 3.0 * solution.circumradius
            bbox = grid_spec.get("bbox", [-radius, radius, -radius, radius])
            grid = grid_sample(solution, bbox, grid_spec.get("resolution", 101))
            result["grid"] = {
                "shape": list(grid.shape),
                "bbox": list(bbox),
                "masked_cells": int(grid.mask.sum()),
                "max_exterior_perturbation": grid.max_exterior_perturbation(),
            }
            if grid_path is not None:
                result["grid"]["rows"] = write_grid_csv(grid, grid_path)
        return result

    def decay(self, spec: Dict) -> Dict:
        """decay: exponent at radii (default 20 and 40 circumradii), optional uncoated comparison."""
        a = spec.get("a", [1.0, 0.0])
        solution = self._field_solution(spec, a)
        rho = solution.circumradius
        radii = spec.get("radii", [20.0 * rho, 40.0 * rho])
        directions = int(spec.get("directions", 64))
        result = {"decay": decay_exponent(solution, radii, directions).to_dict(), "circumradius": rho}

        inclusion = spec["inclusion"]
        if spec.get("compare_uncoated", False) and inclusion.get("type") == "coating":
            core = build_curve(ConformalSpec(self._map(inclusion), 1.0), self._nodes(spec))
            uncoated = solve_field(SimpleInclusion(core, math.inf), a)
            theta = 2.0 * np.pi * np.arange(directions) / directions
            ring = 2.0 * rho * np.column_stack([np.cos(theta), np.sin(theta)])
            coated_max = float(np.max(np.abs(solution.perturbation(ring))))
            uncoated_max = float(np.max(np.abs(uncoated.perturbation(ring))))
            result["uncoated"] = {
                "decay": decay_exponent(uncoated, radii, directions).to_dict(),
                "ring_radius": 2.0 * rho,
                "coated_max": coated_max,
                "uncoated_max": uncoated_max,
                "perturbation_ratio": coated_max / uncoated_max,
            }
        return result

    def shell_problem(self, spec: Dict) -> Dict:
        """odp: residuals of the shell problem for {pair}, plus sigma_m when sigma_c, sigma_s are given."""
        pair = shell_pair_from_dict(_require(spec, "pair"))
        solution = odp_solution(pair)
        residual = odp_residual(solution, pair, int(spec.get("samples", 200)), int(spec.get("seed", 0)))
        result = {**solution.to_dict(), "residuals": residual.to_dict()}
        confocal = pair.as_confocal() if isinstance(pair, BallPair) else pair
        result["alpha"] = list(confocal.alpha)
        result["volume_fraction"] = confocal.volume_fraction
        if "points" in spec:
            w, grad = solution(spec["points"])
            result["points"] = [{"w": float(v), "grad": g} for v, g in zip(w, grad.tolist())]
        if "sigma_c" in spec and "sigma_s" in spec:
            result["conductivity"] = confocal_matrix_conductivity(
                confocal.c2, confocal.rho0, spec["sigma_c"], spec["sigma_s"]
            ).to_dict()
        return result

    def quadrature(self, spec: Dict) -> Dict:
        """quad: one of neumann_oval, focal_ellipse, mean_value, newtonian."""
        identity = spec.get("identity", "neumann_oval")
        degree = int(spec.get("degree", 6))
        n = self._nodes(spec)
        if identity == "neumann_oval":
            return neumann_oval_identity(_require(spec, "alpha"), _require(spec, "epsilon"), degree, n).to_dict()
        if identity == "focal_ellipse":
            return focal_ellipse_identity(_require(spec, "axes"), degree, n).to_dict()
        if identity == "mean_value":
            inner, outer = _require(spec, "inner"), _require(spec, "outer")
            if isinstance(inner, dict):
                inner = build_curve(curve_spec_from_dict(inner), n)
                outer = build_curve(curve_spec_from_dict(outer), n)
            return mean_value_identity(inner, outer, degree).to_dict()
        if identity == "newtonian":
            return check_newtonian_formulation(
                _require(spec, "c2"), _require(spec, "rho0"),
                int(spec.get("samples", 200)), int(spec.get("samples", 200)),
                spec.get("shell_axes"), int(spec.get("seed", 0)),
            ).to_dict()
        raise SpecError(f"unknown quadrature identity '{identity}'")
