"""``ggkp`` command line entry point.

Exit codes: 0 success, 1 verification failure, 2 usage or configuration error.
"""

import argparse
import sys
from typing import Any, Dict, List, Optional

from loguru import logger
from pydantic import ValidationError

from .. import __version__
from ..config import reload_settings, settings
from ..errors import GGKPError
from ..storage import load_config_file
from .checks import SUITE_NAMES
from .commands import cmd_element, cmd_grid, cmd_limit_scan, cmd_overlap, cmd_verify
from .schema import RunConfig

LOG_LEVELS = ("TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL")
# flag dest -> RunConfig key
SCALAR_OVERRIDES = {
    "hbar": "hbar",
    "L": "L",
    "P": "P",
    "tol": "tolerance",
    "char": "characteristic",
    "resolution": "resolution",
}


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON (or YAML) run configuration")
    common.add_argument("--seed", type=int, default=0, help="Seed for random checks")
    common.add_argument("--out", help="Output path (default: stdout or GGKP_OUTPUT_DIR)")
    common.add_argument("--log-level", type=str.upper, choices=LOG_LEVELS)

    overrides = common.add_argument_group("parameter overrides")
    overrides.add_argument("--hbar", type=float)
    overrides.add_argument("--L", type=float, help="Position period")
    overrides.add_argument("--P", type=float, help="Momentum period")
    overrides.add_argument("--sigma", type=float, help="Width of every state")
    overrides.add_argument("--tol", type=float, help="Theta tolerance")
    overrides.add_argument("--char", help="Characteristic 'e1,e2;d1,d2'")
    overrides.add_argument("--nx", type=int)
    overrides.add_argument("--nk", type=int)
    overrides.add_argument("--resolution", type=int, help="Overlap samples per axis")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ggkp", description="Generalized GKP numerics on the noncommutative torus"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = _common_options()
    commands = parser.add_subparsers(dest="command", required=True)

    grid = commands.add_parser("grid", parents=[common], help="Transform over a grid")
    grid.add_argument("--format", choices=("csv", "json", "pgm"), default="csv")
    grid.add_argument("--xi", action="store_true", help="Dimensionless [0,2)^2 view")
    grid.set_defaults(handler=cmd_grid)

    element = commands.add_parser(
        "element", parents=[common], help="One lattice displacement matrix element"
    )
    element.add_argument("m", type=int)
    element.add_argument("n", type=int)
    element.add_argument("--oracle", action="store_true", help="Compare with quadrature")
    element.add_argument("--nodes", type=int, help="Initial quadrature node count")
    element.add_argument("--no-refine", action="store_true")
    element.set_defaults(handler=cmd_element)

    verify = commands.add_parser("verify", parents=[common], help="Run check suites")
    verify.add_argument("--suite", choices=SUITE_NAMES, default="all")
    verify.set_defaults(handler=cmd_verify)

    scan = commands.add_parser(
        "limit-scan", parents=[common], help="Peak width as the lattice grows"
    )
    scan.add_argument("--scales", type=float, nargs="+")
    scan.set_defaults(handler=cmd_limit_scan)

    overlap = commands.add_parser(
        "overlap", parents=[common], help="Overlap of the two logical states"
    )
    overlap.set_defaults(handler=cmd_overlap)
    return parser


def build_config(args: argparse.Namespace) -> RunConfig:
    data: Dict[str, Any] = load_config_file(args.config) if args.config else {}
    data = dict(data)

    def nested(key: str) -> Dict[str, Any]:
        section = data.get(key) or {}
        if isinstance(section, dict):
            section = dict(section)
            data[key] = section
        return section

    for flag, key in SCALAR_OVERRIDES.items():
        if getattr(args, flag) is not None:
            data[key] = getattr(args, flag)
    if args.sigma is not None:
        nested("probe")["sigma"] = args.sigma
        nested("signal")["sigma"] = args.sigma
        data["logical_sigma"] = args.sigma
    for flag in ("nx", "nk"):
        if getattr(args, flag) is not None:
            nested("grid")[flag] = getattr(args, flag)
    if getattr(args, "scales", None):
        data["scales"] = args.scales
    return RunConfig.model_validate(data)


def _configure_logging(level: Optional[str]) -> None:
    logger.remove()
    logger.add(sys.stderr, level=level or settings.log_level)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        reload_settings()
    except ValidationError as e:
        print(f"ggkp: invalid GGKP_ environment: {e}", file=sys.stderr)
        return 2
    _configure_logging(args.log_level)
    try:
        config = build_config(args)
        return args.handler(args, config)
    except GGKPError as e:
        print(f"ggkp: error: {e.detail}", file=sys.stderr)
        return e.exit_code
    except ValidationError as e:
        print(f"ggkp: invalid configuration: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"ggkp: error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"ggkp: cannot write output: {e}", file=sys.stderr)
        return 2


def run() -> None:
    sys.exit(main())
