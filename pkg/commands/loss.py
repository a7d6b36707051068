"""`loss`: partial matching loss and gradient check of one instance file."""

import argparse

from loguru import logger

import loss
from config_loader import get_float
from errors import CheckError
from models import LossInputs

from .base import BaseCommand

GRADIENT_TOL = 1e-5


class LossCommand(BaseCommand):
    name = "loss"
    help = "Evaluate the partial matching loss against the file's ground truth"

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser):
        parser.add_argument("input", help="Instance file with ground_truth (JSON)")
        parser.add_argument("--lambda", dest="lam", type=float, help="Weight of the bias term")
        parser.add_argument("--step", type=float, help="Finite-difference step")
        parser.add_argument(
            "--fixed-biases",
            action="store_true",
            help="Use alpha = beta = 1 and no bias term",
        )
        parser.add_argument("--output", "-o", help="Optional JSON report")

    def execute(self, args: argparse.Namespace):
        inst, _ = self.load_instance(args.input)
        lam = self.option(args.lam, "loss", "lambda")
        step = self.option(args.step, "loss", "fd_step")
        epsilon = get_float(self.config, "loss", "epsilon")

        inputs = LossInputs.from_instance(inst, lam=lam, fixed_biases=args.fixed_biases)
        report = loss.loss_gradients(inputs, epsilon=epsilon)
        fd_error = loss.finite_difference_check(inputs, step=step, epsilon=epsilon)
        logger.info(
            f"L_cost={report.l_cost:.6g} L_bias={report.l_bias:.6g} L={report.l_total:.6g}, "
            f"gradient check error {fd_error:.3e}"
        )

        if args.output:
            payload = self.reporter.loss_to_dict(report, inputs.rho, inputs.lam, fd_error)
            self.reporter.save_json(payload, args.output)
        if fd_error >= GRADIENT_TOL:
            raise CheckError(f"gradient check error {fd_error:.3e} exceeds {GRADIENT_TOL:g}")
