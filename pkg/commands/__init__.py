"""Commands package."""

from .base import EXIT_INVALID, EXIT_IO, EXIT_OK, BaseCommand
from .bench import BenchCommand
from .gen import GenCommand
from .loss import LossCommand
from .oracle import OracleCommand
from .solve import SolveCommand
from .sweep import SweepCommand

COMMANDS = [SolveCommand, OracleCommand, GenCommand, SweepCommand, BenchCommand, LossCommand]

__all__ = [
    "BaseCommand",
    "BenchCommand",
    "COMMANDS",
    "EXIT_INVALID",
    "EXIT_IO",
    "EXIT_OK",
    "GenCommand",
    "LossCommand",
    "OracleCommand",
    "SolveCommand",
    "SweepCommand",
]
