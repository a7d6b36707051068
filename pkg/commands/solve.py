"""`solve`: optimal partial matching of one instance file."""

import argparse

from loguru import logger

import pgm
from errors import ValidationError

from .base import BaseCommand

TRANSPOSE_POLICIES = ("auto", "never")


class SolveCommand(BaseCommand):
    name = "solve"
    help = "Solve an instance file and write a JSON report"

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser):
        parser.add_argument("input", help="Instance file (JSON)")
        parser.add_argument("--output", "-o", help="Report path (default: <input>.report.json)")
        parser.add_argument("--rho", type=float, help="Override the instance's rho")
        parser.add_argument(
            "--transpose-policy",
            choices=TRANSPOSE_POLICIES,
            help="auto: solve m > n on the transpose; never: reject m > n",
        )

    def execute(self, args: argparse.Namespace):
        policy = args.transpose_policy or str(
            self.config.get("solver", {}).get("transpose_policy", "auto")
        )
        if policy not in TRANSPOSE_POLICIES:
            raise ValidationError(f"unknown transpose policy {policy!r}")

        inst, sinkhorn = self.load_instance(args.input, rho=args.rho)
        report = pgm.solve(inst, allow_transpose=policy == "auto")
        logger.info(
            f"{inst!r}: matched {report.matched_count} pair(s), total cost {report.total_cost:.6g}"
        )

        output = args.output or f"{args.input}.report.json"
        self.reporter.save_json(self.reporter.solve_to_dict(inst, report, sinkhorn), output)
