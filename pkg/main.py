#!/usr/bin/env python3
"""
Partial matching - Main Entry Point

Optimal partial assignments between two node sets under a weighted
total-variation penalty, with brute-force oracles, synthetic instances,
sweeps, timings and the partial matching loss.
"""

import argparse
import sys
from datetime import datetime
from pathlib import Path
from typing import Optional

import yaml
from loguru import logger

from commands import COMMANDS, EXIT_INVALID, EXIT_IO
from config_loader import load_config

LOG_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | "
    "<level>{level: <8}</level> | "
    "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> | "
    "<level>{message}</level>"
)


def setup_logging(debug: bool = False, log_dir: Optional[str] = None):
    """Configure logging: stderr always, plus a daily file when log_dir is set."""
    logger.remove()

    level = "DEBUG" if debug else "INFO"
    logger.add(sys.stderr, format=LOG_FORMAT, level=level, colorize=True)

    if log_dir:
        path = Path(log_dir)
        path.mkdir(parents=True, exist_ok=True)
        log_file = path / f"partial-matching-{datetime.now().strftime('%Y-%m-%d')}.log"
        logger.add(log_file, format=LOG_FORMAT, level="DEBUG", rotation="1 day")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Partial graph matching solver")
    parser.add_argument(
        "--config",
        "-c",
        default=None,
        help="Path to config file (default: ./config.yaml if present)",
    )
    parser.add_argument(
        "--debug",
        "-d",
        action="store_true",
        help="Verbose logging",
    )

    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        sub = subparsers.add_parser(command.name, help=command.help)
        command.add_arguments(sub)
        sub.set_defaults(command_class=command)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    """Main entry point; returns the process exit code."""
    args = build_parser().parse_args(argv)

    setup_logging(args.debug)

    # Load configuration
    try:
        config = load_config(args.config)
    except OSError as e:
        logger.error(f"io error: failed to load config: {e}")
        return EXIT_IO
    except (yaml.YAMLError, ValueError) as e:
        logger.error(f"validation error: invalid config: {e}")
        return EXIT_INVALID

    log_dir = str(config.get("logging", {}).get("dir", "") or "")
    if log_dir:
        setup_logging(args.debug, log_dir)

    logger.debug(f"Running `{args.command}` with config {args.config or 'defaults'}")
    return args.command_class(config).run(args)


if __name__ == "__main__":
    sys.exit(main())
