"""`sweep`: ρ or λ sensitivity table of one instance file."""

import argparse

from loguru import logger

import generator
from errors import ValidationError
from models import LambdaRow, SweepRow

from .base import BaseCommand, parse_values

SWEEP_FIELDS = {
    "rho": list(SweepRow.__dataclass_fields__),
    "lambda": list(LambdaRow.__dataclass_fields__),
}


class SweepCommand(BaseCommand):
    name = "sweep"
    help = "Sweep rho (solver) or lambda (loss) and write a CSV table"

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser):
        parser.add_argument("input", help="Instance file (JSON)")
        parser.add_argument("--mode", choices=sorted(SWEEP_FIELDS), required=True)
        parser.add_argument(
            "--values",
            help="Ascending comma-separated grid (default for rho: 0.1,0.2,...,1.0)",
        )
        parser.add_argument("--output", "-o", required=True, help="CSV path")

    def execute(self, args: argparse.Namespace):
        if args.values is not None:
            values = parse_values(args.values, "values")
        elif args.mode == "rho":
            values = list(generator.RHO_GRID)
        else:
            raise ValidationError("lambda sweep needs --values")

        inst, _ = self.load_instance(args.input)
        if args.mode == "rho":
            rows = generator.rho_sweep(inst, values, max_workers=self.workers)
        else:
            rows = generator.lambda_sweep(inst, values, max_workers=self.workers)

        self.reporter.save_csv(rows, SWEEP_FIELDS[args.mode], args.output)
        logger.info(f"{args.mode} sweep over {len(rows)} value(s) done")
