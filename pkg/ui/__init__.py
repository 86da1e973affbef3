"""Command line surface: argument parsing and command handlers."""

from .cli import build_parser, parse_arguments  # noqa: F401
from .commands import COMMANDS, CommandError, RunManifest, run_command  # noqa: F401

__all__ = ["build_parser", "parse_arguments", "COMMANDS", "CommandError", "RunManifest", "run_command"]
