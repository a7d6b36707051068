"""`gen`: write a planted instance file."""

import argparse

from loguru import logger

from generator import planted_instance
from instance_file import InstanceFile, write_instance_file
from models import PlantSpec

from .base import BaseCommand


class GenCommand(BaseCommand):
    name = "gen"
    help = "Generate a synthetic instance with a planted partial matching"

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser):
        defaults = PlantSpec(m=0, n=0, k=0)
        parser.add_argument("--output", "-o", required=True, help="Instance file to write")
        parser.add_argument("--m", type=int, required=True, help="Source nodes")
        parser.add_argument("--n", type=int, required=True, help="Target nodes")
        parser.add_argument("--k", type=int, required=True, help="Planted pairs")
        parser.add_argument("--noise-sigma", type=float, default=defaults.noise_sigma)
        parser.add_argument("--base-low", type=float, default=defaults.base_low)
        parser.add_argument("--base-high", type=float, default=defaults.base_high)
        parser.add_argument("--matched-cost", type=float, default=defaults.matched_cost)
        parser.add_argument("--rho", type=float, help="rho stored in the file (default: solver.rho)")
        parser.add_argument("--seed", type=int, default=defaults.seed)

    def execute(self, args: argparse.Namespace):
        spec = PlantSpec(
            m=args.m,
            n=args.n,
            k=args.k,
            noise_sigma=args.noise_sigma,
            base_low=args.base_low,
            base_high=args.base_high,
            matched_cost=args.matched_cost,
            seed=args.seed,
            rho=self.option(args.rho, "solver", "rho"),
        )
        inst = planted_instance(spec)
        write_instance_file(InstanceFile.from_instance(inst), args.output)
        logger.info(f"Planted {spec.k} pair(s) in a {spec.m}x{spec.n} instance (seed {spec.seed})")
