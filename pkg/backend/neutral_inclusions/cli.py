"""
Command-line interface: one subcommand per service command.

    python run.py pt --input disk.json --output disk_pt.json
    python run.py field --input coated.json --output field.json --grid field.csv

Exit status is 0 on success, 2 on invalid input and 3 on a numerical failure.
"""

import argparse
import json
import logging
import os
import sys
from typing import Dict, List, Optional

from dotenv import load_dotenv

from .config import DEFAULT_MODES, DEFAULT_NODES, ENV_LOG_LEVEL, ENV_MODES, ENV_NODES
from .service import COMMANDS, NeutralInclusionService

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

HELP = {
    "pt": "polarization tensor of a simple or core-shell inclusion",
    "coat": "explicit weakly neutral coating for a map with b_D = 0",
    "beta": "weakly neutral bonding parameter",
    "lc-disk": "disk with an imperfect interface",
    "field": "exterior potential at points and on a grid",
    "decay": "far-field decay exponent",
    "odp": "over-determined shell problem for confocal ellipsoids or balls",
    "quad": "quadrature domain identities",
    "hs": "Hashin-Shtrikman slacks of a simple inclusion",
    "newton-coat": "Newton search for a coating of a perturbed disk",
}


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name)
    if value is None or value.strip() == "":
        return default
    try:
        return int(value)
    except ValueError:
        raise ValueError(f"environment variable {name} must be an integer, got {value!r}")


def _env_log_level() -> int:
    name = os.getenv(ENV_LOG_LEVEL, "INFO").strip().upper()
    level = logging.getLevelName(name)
    if not isinstance(level, int):
        raise ValueError(f"environment variable {ENV_LOG_LEVEL} is not a log level: {name!r}")
    return level


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="neutral-inclusions",
                                     description="Neutral and weakly neutral inclusion toolkit")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        sub = subparsers.add_parser(command, help=HELP[command])
        sub.add_argument("--input", required=True, help="problem spec (JSON)")
        sub.add_argument("--output", help="result file (JSON); stdout when omitted")
        sub.add_argument("--log-level", help=f"overrides {ENV_LOG_LEVEL}")
        if command == "field":
            sub.add_argument("--grid", help="write the sampled grid as CSV")
    return parser


def configure_logging(level: int) -> None:
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )


def _write(payload: Dict, path: Optional[str]) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n"
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def run(argv: Optional[List[str]] = None) -> int:
    """Parse argv, run the command and write its JSON; returns the exit status."""
    load_dotenv()
    args = build_parser().parse_args(argv)

    level = _env_log_level()
    if args.log_level:
        level = logging.getLevelName(args.log_level.upper())
        if not isinstance(level, int):
            level = logging.INFO
    configure_logging(level)

    service = NeutralInclusionService(
        default_nodes=_env_int(ENV_NODES, DEFAULT_NODES),
        default_modes=_env_int(ENV_MODES, DEFAULT_MODES),
    )

    try:
        with open(args.input, "r", encoding="utf-8") as f:
            spec = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        logger.error(f"❌ Could not read problem spec {args.input}: {e}")
        _write({"success": False, "command": args.command, "error": str(e),
                "error_type": "SpecError", "error_kind": "validation"}, args.output)
        return EXIT_VALIDATION

    outcome = service.run(args.command, spec, getattr(args, "grid", None))
    _write(outcome, args.output)
    if outcome["success"]:
        return EXIT_OK
    return EXIT_NUMERICAL if outcome["error_kind"] == "numerical" else EXIT_VALIDATION


def main() -> None:
    sys.exit(run())
