"""CLI interface for hybridflow"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from numpy.linalg import LinAlgError
from yaml import YAMLError

from hybridflow.cli.commands import COMMAND_MAP, CommandResult
from hybridflow.cli.config import COMMANDS, RunConfig, validate
from hybridflow.utils.config import load_config, save_config
from hybridflow.utils.errors import (
    ConfigValidationError,
    ConstraintViolationError,
    IntegrityError,
    SamplerError,
    StepFailureError,
)
from hybridflow.utils.io import write_csv, write_json
from hybridflow.utils.logger import get_logger, set_level, set_log_dir

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2
EXIT_CHECK_FAILED = 3

NUMERICAL_ERRORS = (
    StepFailureError,
    SamplerError,
    IntegrityError,
    ConstraintViolationError,
    LinAlgError,
)


def apply_overrides(config: Dict[str, Any], seed: Optional[int]) -> Dict[str, Any]:
    """Copy of the raw config with command-line overrides applied"""
    config = dict(config)
    if seed is not None:
        numerics = dict(config.get("numerics") or {})
        numerics["seed"] = seed
        config["numerics"] = numerics
    return config


def write_outputs(
    command: str, result: CommandResult, out_dir: Path, config: Dict[str, Any]
) -> List[Path]:
    """<command>.json, the resolved config and one CSV per table, each written atomically"""
    written = [write_json(out_dir / f"{command}.json", {"command": command, **result.report})]
    written.append(save_config(config, out_dir / f"{command}.config.yaml"))
    for stem, frame in result.tables.items():
        written.append(write_csv(out_dir / f"{stem}.csv", frame))
    return written


def run(
    config: Dict[str, Any],
    command: str,
    out: Optional[str] = None,
    seed: Optional[int] = None,
) -> int:
    """Validate, execute and write one command; returns the process exit code"""
    config = apply_overrides(config, seed)
    diagnostics = validate(config, command)
    if diagnostics:
        for d in diagnostics:
            logger.error(f"Invalid config: {d}")
        return EXIT_VALIDATION
    cfg = RunConfig.from_dict(config, command)
    out_dir = Path(out or cfg.output.get("dir", "out"))
    logger.info(f"Running {command} (output in {out_dir})")

    try:
        result = COMMAND_MAP[command](cfg)
    except NUMERICAL_ERRORS as e:
        logger.error(f"{command} failed: {e}")
        return EXIT_NUMERICAL
    except (ConfigValidationError, ValueError) as e:
        logger.error(f"{command} rejected its input: {e}")
        return EXIT_VALIDATION

    for path in write_outputs(command, result, out_dir, config):
        logger.info(f"Wrote {path}")
    if not result.passed:
        logger.error(f"{command}: property check failed")
        return EXIT_CHECK_FAILED
    logger.info(f"{command}: all checks passed")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hybridflow",
        description="Hybrid quantum-classical Hamiltonian dynamics",
    )
    parser.add_argument(
        "command",
        choices=list(COMMANDS) + ["validate"],
        help="Command to run; validate only checks the config",
    )
    parser.add_argument("--config", required=True, help="Run configuration file (YAML or JSON)")
    parser.add_argument("--out", help="Output directory (overrides output.dir)")
    parser.add_argument("--seed", type=int, help="Random seed (overrides numerics.seed)")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", action="store_true", help="Log debug messages")
    verbosity.add_argument("--quiet", action="store_true", help="Log warnings and errors only")
    parser.add_argument("--log-dir", help="Also write log files to this directory")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    if args.verbose:
        set_level(logging.DEBUG)
    elif args.quiet:
        set_level(logging.WARNING)
    if args.log_dir:
        set_log_dir(args.log_dir)

    # Load configuration
    try:
        config = load_config(args.config)
    except (FileNotFoundError, ValueError, YAMLError) as e:
        logger.error(f"Failed to load config: {e}")
        return EXIT_VALIDATION

    if args.command == "validate":
        diagnostics = validate(apply_overrides(config, args.seed))
        for d in diagnostics:
            print(d)
        if diagnostics:
            return EXIT_VALIDATION
        logger.info(f"{args.config} is valid")
        return EXIT_OK

    return run(config, args.command, out=args.out, seed=args.seed)


if __name__ == "__main__":
    sys.exit(main())
