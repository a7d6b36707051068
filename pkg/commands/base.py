"""Base class for CLI subcommands."""

import argparse
from typing import Optional

from loguru import logger

from config_loader import get_float, get_sinkhorn_config, get_worker_count
from errors import CheckError, SizeLimitError, ValidationError
from instance_file import read_instance_file, to_instance
from models import Instance, SinkhornConfig, SinkhornResult
from reporter import Reporter

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IO = 2


def parse_values(text: str, name: str) -> list[float]:
    """Comma-separated numbers, e.g. '0.1,0.2,0.4'."""
    parts = [part.strip() for part in str(text or "").split(",") if part.strip()]
    try:
        return [float(part) for part in parts]
    except ValueError as e:
        raise ValidationError(f"{name} must be comma-separated numbers, got {text!r}") from e


class BaseCommand:
    """
    One subcommand of main.py.

    Subclasses declare name/help, add their flags in add_arguments and do
    the work in execute, raising on failure. run maps failures to exit codes
    and logs one `<kind> error: <message>` line.
    """

    name = ""
    help = ""

    def __init__(self, config: dict):
        self.config = config
        self.reporter = Reporter()

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser):
        pass

    def execute(self, args: argparse.Namespace):
        raise NotImplementedError

    def run(self, args: argparse.Namespace) -> int:
        try:
            self.execute(args)
        except SizeLimitError as e:
            logger.error(f"limit error: {e}")
            return EXIT_INVALID
        except ValidationError as e:
            logger.error(f"validation error: {e}")
            return EXIT_INVALID
        except CheckError as e:
            logger.error(f"check error: {e}")
            return EXIT_INVALID
        except OSError as e:
            logger.error(f"io error: {e}")
            return EXIT_IO
        return EXIT_OK

    # Config helpers, CLI flags take precedence

    def option(self, value: Optional[float], section: str, key: str) -> float:
        return float(value) if value is not None else get_float(self.config, section, key)

    def load_instance(
        self, path: str, rho: Optional[float] = None
    ) -> tuple[Instance, Optional[SinkhornResult]]:
        """Read an instance file; rho falls back to the file, then to solver.rho."""
        parsed = read_instance_file(path)
        return to_instance(
            parsed,
            default_rho=get_float(self.config, "solver", "rho"),
            default_sinkhorn=self.sinkhorn_config,
            rho_override=rho,
        )

    @property
    def workers(self) -> int:
        return get_worker_count(self.config)

    @property
    def sinkhorn_config(self) -> SinkhornConfig:
        return get_sinkhorn_config(self.config)
