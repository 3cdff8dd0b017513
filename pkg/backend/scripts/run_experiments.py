#!/usr/bin/env python3
"""
Reproduce the coating and bonding experiments and print a summary.

Coatings: Phi = zeta + 1/(4 zeta^2) with sigma_s = 0.5 and Phi = zeta + 1/(4 zeta^3)
with sigma_s = 0.3, coated against uncoated decay. Bonding: the weakly neutral
profile and its refinement for b_D in {0, 0.1, 0.25}, plus the constant beta = 1 control.
Usage:
  python backend/scripts/run_experiments.py
  python backend/scripts/run_experiments.py --nodes 256 --json experiments.json
"""

import argparse
import json
import logging
import os
import sys

# Ensure backend modules are importable when running from project root or scripts
CURRENT_DIR = os.path.dirname(os.path.abspath(__file__))
BACKEND_DIR = os.path.dirname(CURRENT_DIR)
if BACKEND_DIR not in sys.path:
    sys.path.insert(0, BACKEND_DIR)

# Load .env from backend or project root if present
try:
    from dotenv import load_dotenv
    backend_env = os.path.join(BACKEND_DIR, '.env')
    project_root = os.path.dirname(BACKEND_DIR)
    root_env = os.path.join(project_root, '.env')
    if os.path.exists(backend_env):
        load_dotenv(backend_env)
    elif os.path.exists(root_env):
        load_dotenv(root_env)
except Exception:
    pass

from neutral_inclusions.config import DEFAULT_MODES, DEFAULT_NODES, ENV_LOG_LEVEL
from neutral_inclusions.service import NeutralInclusionService

logging.basicConfig(
    level=os.getenv(ENV_LOG_LEVEL, 'WARNING').upper(),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    handlers=[logging.StreamHandler(sys.stderr)]
)
logger = logging.getLogger(__name__)

COATINGS = [
    {"name": "zeta + 1/(4 zeta^2)", "map": [0.0, 0.25], "sigma_s": 0.5},
    {"name": "zeta + 1/(4 zeta^3)", "map": [0.0, 0.0, 0.25], "sigma_s": 0.3},
]
BONDING_B = [0.0, 0.1, 0.25]


def coating_experiment(service: NeutralInclusionService, case: dict, nodes: int) -> dict:
    spec = {
        "inclusion": {"type": "coating", "map": case["map"], "sigma_s": case["sigma_s"]},
        "compare_uncoated": True,
        "nodes": nodes,
    }
    return service.run("decay", spec)


def bonding_experiment(service: NeutralInclusionService, b: float, modes: int) -> dict:
    rows = {}
    for label, spec in (
        ("weakly_neutral", {"map": [b], "modes": modes}),
        ("refined", {"map": [b], "modes": modes, "refine": True}),
    ):
        rows[label] = service.run("beta", spec)
    return rows


def constant_beta_control(service: NeutralInclusionService, modes: int) -> dict:
    spec = {"inclusion": {"type": "imperfect", "map": [0.1], "beta": 1.0}, "modes": modes, "a": [1.0, 0.0]}
    return service.run("field", spec)


def _line(label: str, result: dict, key_path) -> str:
    if not result.get("success"):
        return f"  ❌ {label}: {result.get('error_type')}: {result.get('error')}"
    value = result["result"]
    for key in key_path:
        value = value[key]
    return f"  ✅ {label}: {value}"


def main():
    parser = argparse.ArgumentParser(description='Run the coating and imperfect bonding experiments')
    parser.add_argument('--nodes', type=int, default=DEFAULT_NODES, help=f'nodes per curve (default: {DEFAULT_NODES})')
    parser.add_argument('--modes', type=int, default=DEFAULT_MODES, help=f'spectral modes (default: {DEFAULT_MODES})')
    parser.add_argument('--json', help='also write every result to this JSON file')
    args = parser.parse_args()

    service = NeutralInclusionService(default_nodes=args.nodes, default_modes=args.modes)
    report = {"coatings": {}, "bonding": {}}

    print("=" * 60)
    print("COATING EXPERIMENTS (coated vs uncoated decay)")
    print("=" * 60)
    for case in COATINGS:
        result = coating_experiment(service, case, args.nodes)
        report["coatings"][case["name"]] = result
        print(f"\n{case['name']}, sigma_s = {case['sigma_s']}")
        print(_line("coated exponent", result, ("decay", "exponent")))
        print(_line("uncoated exponent", result, ("uncoated", "decay", "exponent")))
        print(_line("perturbation ratio at 2 x circumradius", result, ("uncoated", "perturbation_ratio")))

    print("\n" + "=" * 60)
    print("IMPERFECT BONDING EXPERIMENTS (|alpha_1| for alpha in {1, i})")
    print("=" * 60)
    for b in BONDING_B:
        rows = bonding_experiment(service, b, args.modes)
        report["bonding"][str(b)] = rows
        print(f"\nb_D = {b}")
        for label, result in rows.items():
            print(_line(label, result, ("far_field", "max_abs_alpha_1")))

    control = constant_beta_control(service, args.modes)
    report["bonding"]["constant_beta_1"] = control
    print("\nControl: beta = 1, b_D = 0.1")
    print(_line("|alpha_1|", control, ("spectral", "abs_alpha_1")))

    # the b_D limit of the weakly neutral profile
    too_large = service.run("beta", {"map": [0.3], "modes": args.modes})
    print(_line("b_D = 0.3", too_large, ("far_field", "max_abs_alpha_1")))
    report["bonding"]["0.3"] = too_large

    if args.json:
        with open(args.json, 'w', encoding='utf-8') as f:
            json.dump(report, f, sort_keys=True, indent=2)
        print(f"\nResults written to {args.json}")


if __name__ == "__main__":
    main()
