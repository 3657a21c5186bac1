"""Command-line entry point - Linear Open Quantum System Simulator"""
import argparse
import sys
from typing import List, Optional

from loguru import logger

from app import __version__
from app.commands import register_model_commands, register_simulation_commands
from app.config import settings
from app.exceptions import SimulationError

LOG_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | "
    "<cyan>{name}</cyan>:<cyan>{function}</cyan> - <level>{message}</level>"
)


def configure_logging(level: Optional[str] = None) -> None:
    """Route loguru output to stderr so stdout carries only results

    The sink looks up sys.stderr on every message, so a replaced stream is
    followed. LOQS_DEBUG lowers the default level to DEBUG and adds
    variable values to tracebacks.
    """
    logger.remove()
    logger.add(
        lambda message: sys.stderr.write(message),
        format=LOG_FORMAT,
        level=level or ("DEBUG" if settings.DEBUG else settings.LOG_LEVEL),
        backtrace=settings.DEBUG,
        diagnose=settings.DEBUG,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loqs",
        description="Gaussian moment simulator for linear open quantum systems",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, help="loguru level for diagnostics on stderr")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True
    register_model_commands(subparsers)
    register_simulation_commands(subparsers)
    return parser


def cli_dispatch(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments and run one subcommand

    Args:
        argv: Arguments without the program name; defaults to sys.argv[1:]

    Returns:
        0 on success, 1 on validation or physics errors, 2 on usage errors
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    configure_logging(args.log_level)
    logger.debug(f"Running {args.command}")

    try:
        return args.handler(args)
    except (SimulationError, ValueError) as e:
        logger.debug(f"{type(e).__name__} in {args.command}")
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(cli_dispatch())
