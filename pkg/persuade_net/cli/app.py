# persuade_net/cli/app.py

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from persuade_net.cli.commands import PRESETS, cmd_equilibria, cmd_policy, cmd_reproduce, cmd_sweep
from persuade_net.config import get_settings
from persuade_net.exceptions import (
    CapExceeded,
    ConfigInvalid,
    InvalidBenefit,
    InvalidGraph,
    PriorOnBoundary,
)
from persuade_net.models.run_config import apply_overrides, load_run_config

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CAP = 2
EXIT_BOUNDARY_PRIOR = 3
EXIT_CONFIG = 4


def configure_logging() -> None:
    """Root logger to stderr, once per process."""
    settings = get_settings()
    logging.basicConfig(
        level=settings.LOG_LEVEL.upper(),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        handlers=[logging.StreamHandler(sys.stderr)],
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="persuade-net",
        description="Equilibria and optimal disclosure for networked epidemic effort games.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def with_config(p: argparse.ArgumentParser, grid_help: str) -> None:
        p.add_argument("--config", type=Path, required=True, help="JSON (or YAML) run config.")
        p.add_argument("--out", type=Path, default=None, help="Output directory (overrides the config).")
        p.add_argument("--mu", type=float, default=None, help="Prior belief (overrides the config).")
        p.add_argument("--grid", type=int, default=None, help=grid_help)

    with_config(sub.add_parser("equilibria", help="Enumerate all equilibria at the prior."),
                "Belief grid size (unused by this command).")
    with_config(sub.add_parser("policy", help="Optimal disclosure policy and diagnostics."),
                "Belief grid size.")
    sweep_parser = sub.add_parser("sweep", help="Expected objective over all policies.")
    with_config(sweep_parser, "Points per policy axis.")
    sweep_parser.add_argument("--half", action="store_true", help="Evaluate p_l + p_h <= 1 and mirror.")

    reproduce = sub.add_parser("reproduce", help="Regenerate a built-in example.")
    reproduce.add_argument("--example", type=int, choices=sorted(PRESETS), required=True)
    reproduce.add_argument("--out", type=Path, default=Path("out"), help="Output directory.")
    reproduce.add_argument("--grid", type=int, default=None, help="Belief grid size.")
    return parser


def run(args: argparse.Namespace) -> None:
    if args.command == "reproduce":
        cmd_reproduce(args.example, args.out, belief=args.grid)
        return

    grid_field = "sweep" if args.command == "sweep" else "belief"
    config = apply_overrides(
        load_run_config(args.config),
        mu=args.mu,
        grid=args.grid,
        out=args.out,
        half=getattr(args, "half", False),
        grid_field=grid_field,
    )
    if args.command == "equilibria":
        cmd_equilibria(config)
    elif args.command == "policy":
        cmd_policy(config)
    else:
        cmd_sweep(config)


def main(argv: Optional[List[str]] = None) -> int:
    """Parses arguments, runs one command and maps failures onto exit codes."""
    args = build_parser().parse_args(argv)
    configure_logging()
    try:
        run(args)
    except CapExceeded as e:
        logger.error(f"{e} Use a smaller graph or raise the cap.")
        return EXIT_CAP
    except PriorOnBoundary as e:
        logger.error(str(e))
        return EXIT_BOUNDARY_PRIOR
    except (ConfigInvalid, InvalidGraph, InvalidBenefit) as e:
        logger.error(f"Invalid input: {e}")
        return EXIT_CONFIG
    except Exception as e:
        logger.error(f"Unhandled error in '{args.command}': {e}", exc_info=True)
        return EXIT_FAILURE
    logger.info(f"'{args.command}' finished.")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
