#!/usr/bin/env python3
"""
Write the exterior field of an inclusion spec to a CSV grid (x,y,u,pert,mask).
Usage:
  python backend/scripts/export_field_grid.py coated.json field.csv --resolution 201
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

from neutral_inclusions.config import ENV_LOG_LEVEL
from neutral_inclusions.service import NeutralInclusionService

logging.basicConfig(
    level=os.getenv(ENV_LOG_LEVEL, 'INFO').upper(),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    handlers=[logging.StreamHandler(sys.stderr)]
)
logger = logging.getLogger(__name__)


def main():
    parser = argparse.ArgumentParser(description='Export the exterior field of an inclusion to CSV')
    parser.add_argument('spec', help='problem spec with an "inclusion" object (JSON)')
    parser.add_argument('output', help='CSV file to write')
    parser.add_argument('--resolution', type=int, help='grid points per axis (default: spec or 101)')
    parser.add_argument('--extent', type=float,
                        help='half-width of the square grid (default: 3 x circumradius)')
    args = parser.parse_args()

    with open(args.spec, 'r', encoding='utf-8') as f:
        spec = json.load(f)

    grid = dict(spec.get('grid') or {})
    if args.resolution is not None:
        grid['resolution'] = args.resolution
    if args.extent is not None:
        grid['bbox'] = [-args.extent, args.extent, -args.extent, args.extent]
    spec['grid'] = grid

    result = NeutralInclusionService().run('field', spec, args.output)
    if result.get('success'):
        info = result['result']['grid']
        print(f"✅ Wrote {info['rows']} rows to {args.output}")
        print(f"Masked cells: {info['masked_cells']}")
        print(f"Max exterior perturbation: {info['max_exterior_perturbation']:.3e}")
    else:
        print(f"❌ Export failed: {result.get('error_type')}: {result.get('error')}")
        sys.exit(3 if result.get('error_kind') == 'numerical' else 2)


if __name__ == "__main__":
    main()
