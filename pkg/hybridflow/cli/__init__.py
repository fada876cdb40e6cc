"""Command-line surface: config validation and command dispatch"""

from hybridflow.cli.commands import COMMAND_MAP, CommandResult
from hybridflow.cli.config import COMMANDS, Diagnostic, RunConfig, validate
from hybridflow.cli.main import main, run

__all__ = [
    "COMMANDS",
    "COMMAND_MAP",
    "CommandResult",
    "Diagnostic",
    "RunConfig",
    "main",
    "run",
    "validate",
]
