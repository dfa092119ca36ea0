"""Command-line entry point for beatlaser.

Usage:
    beatlaser steady --config p1.json
    cat p1.json | beatlaser derive --format json
    beatlaser transient --config p1.json --fock --out p1_transient.csv

Results go to stdout (or --out); logs go to stderr.
"""

import argparse
import json
import logging
import sys
from collections.abc import Callable
from pathlib import Path
from typing import TextIO

from pydantic import ValidationError

from beatlaser import __version__
from beatlaser.commands.command_derive import cmd_derive
from beatlaser.commands.command_mc import cmd_mc
from beatlaser.commands.command_oracle import cmd_oracle_check
from beatlaser.commands.command_steady import cmd_steady
from beatlaser.commands.command_sweep import cmd_sweep
from beatlaser.commands.command_transient import cmd_transient
from beatlaser.config.settings import EXIT_CONFIG, EXIT_INTERNAL, LOG_FORMAT
from beatlaser.schemas.schema_run import CommandResult, RunConfig
from beatlaser.utils.errors import ConfigurationError
from beatlaser.utils.transform import render_document, render_table, write_text

logger = logging.getLogger("beatlaser")

COMMANDS: dict[str, Callable[[RunConfig, argparse.Namespace], CommandResult]] = {
    "derive": lambda config, _: cmd_derive(config),
    "steady": lambda config, _: cmd_steady(config),
    "transient": lambda config, args: cmd_transient(config, fock=args.fock),
    "sweep": lambda config, _: cmd_sweep(config),
    "mc": lambda config, _: cmd_mc(config),
    "oracle-check": lambda config, _: cmd_oracle_check(config),
}


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per action."""
    parser = argparse.ArgumentParser(
        prog="beatlaser",
        description="Two-photon coherent beat laser: moments, oracles, sweeps",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument(
        "command", choices=list(COMMANDS), help="Action to perform"
    )
    parser.add_argument(
        "--config", metavar="PATH", help="JSON run configuration; stdin if omitted"
    )
    parser.add_argument("--out", metavar="PATH", help="Output file; default stdout")
    parser.add_argument(
        "--format", choices=["csv", "json"], help="Output format"
    )
    parser.add_argument(
        "--fock", action="store_true", help="Add Fock-oracle columns to transient"
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--quiet", action="store_true", help="Only warnings")
    verbosity.add_argument("--verbose", action="store_true", help="Debug logging")
    return parser


def load_config(path: str | None, stdin: TextIO | None = None) -> RunConfig:
    """
    Read, validate and normalize a run configuration.

    Args:
        path: JSON file, or None (or "-") to read stdin
        stdin: Stream used instead of ``sys.stdin``

    Returns:
        RunConfig with every rate and time in units of gamma_unit

    Raises:
        ConfigurationError: If the file is unreadable, not JSON or invalid
    """
    try:
        if path is None or path == "-":
            text = (stdin or sys.stdin).read()
        else:
            text = Path(path).read_text(encoding="utf-8")
        data = json.loads(text)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigurationError(f"Cannot read configuration: {e}") from e
    try:
        return RunConfig.model_validate(data).normalized()
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(part) for part in err['loc'])}: {err['msg']}"
            for err in e.errors()
        )
        raise ConfigurationError(f"Invalid configuration: {problems}") from e


def _configure_logging(args: argparse.Namespace) -> None:
    level = logging.INFO
    if args.quiet:
        level = logging.WARNING
    elif args.verbose:
        level = logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def main(argv: list[str] | None = None) -> int:
    """Run one command and return its exit code."""
    args = build_parser().parse_args(argv)
    _configure_logging(args)

    try:
        config = load_config(args.config)
    except ConfigurationError as e:
        logger.error("%s", e)
        return EXIT_CONFIG

    try:
        result = COMMANDS[args.command](config, args)
        if not result.empty:
            fmt = args.format or config.output.format or result.default_format
            if result.table is not None:
                text = render_table(result.table, fmt)
            else:
                text = render_document(result.document, fmt)
            write_text(text, args.out or config.output.path)
    except Exception:
        logger.exception("Internal error while running %s", args.command)
        return EXIT_INTERNAL
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
