"""`bench`: solver timings per problem size."""

import argparse
import time

import numpy as np
from loguru import logger

import core
import pgm
from config_loader import get_float, get_int
from errors import CheckError, ValidationError
from lap import solve_lap
from models import BenchRow, Instance

from .base import BaseCommand, parse_values

BENCH_RHO = 0.4


def bench_instance(rng: np.random.Generator, size: int) -> Instance:
    """size x size instance with C ~ U[0, 1], unit biases and ρ = 0.4."""
    return core.make_instance(rng.uniform(0.0, 1.0, size=(size, size)), np.ones(size), np.ones(size), BENCH_RHO)


def time_size(inst: Instance, repeats: int) -> tuple[list[float], list[float]]:
    """Milliseconds of full solves and of the embedding + LAP step alone."""
    solve_ms, head_ms = [], []
    for _ in range(repeats):
        start = time.perf_counter()
        pgm.solve(inst)
        solve_ms.append((time.perf_counter() - start) * 1000.0)

        start = time.perf_counter()
        solve_lap(pgm.build_embedding(inst).cbar)
        head_ms.append((time.perf_counter() - start) * 1000.0)
    return solve_ms, head_ms


def bench_rows(sizes: list[int], seed: int, repeats: int) -> list[BenchRow]:
    rows: list[BenchRow] = []
    for size, child in zip(sizes, np.random.SeedSequence(seed).spawn(len(sizes))):
        inst = bench_instance(np.random.default_rng(child), size)
        solve_ms, head_ms = time_size(inst, repeats)
        mean = float(np.mean(solve_ms))

        ratio = None
        if rows and size == 2 * rows[-1].n and rows[-1].mean_ms > 0:
            ratio = mean / rows[-1].mean_ms
        rows.append(
            BenchRow(
                n=size,
                mean_ms=mean,
                p95_ms=float(np.percentile(solve_ms, 95)),
                head_ms=float(np.mean(head_ms)),
                ratio=ratio,
            )
        )
        logger.info(f"n={size}: mean {mean:.2f} ms over {repeats} run(s)")
    return rows


class BenchCommand(BaseCommand):
    name = "bench"
    help = "Time solve() on random square instances and check cubic scaling"

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser):
        parser.add_argument("--sizes", default="250,500,1000", help="Comma-separated sizes")
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument("--repeats", type=int, help="Timed runs per size")
        parser.add_argument("--output", "-o", required=True, help="CSV path")

    def execute(self, args: argparse.Namespace):
        values = parse_values(args.sizes, "sizes")
        if not values:
            raise ValidationError("no sizes given")
        if any(v != int(v) or v < 1 for v in values):
            raise ValidationError(f"sizes must be positive integers, got {args.sizes!r}")
        repeats = args.repeats if args.repeats is not None else get_int(self.config, "bench", "repeats")
        if repeats < 1:
            raise ValidationError(f"repeats must be positive, got {repeats}")
        if args.seed < 0:
            raise ValidationError(f"seed must be nonnegative, got {args.seed}")

        rows = bench_rows([int(v) for v in values], args.seed, repeats)
        self.reporter.save_csv(rows, list(BenchRow.__dataclass_fields__), args.output)

        max_ratio = get_float(self.config, "bench", "max_ratio")
        slow = [row for row in rows if row.ratio is not None and row.ratio > max_ratio]
        for row in slow:
            logger.warning(f"time({row.n}) / time({row.n // 2}) = {row.ratio:.2f} exceeds {max_ratio:g}")
        if slow:
            raise CheckError(f"{len(slow)} doubling(s) slower than the cubic bound {max_ratio:g}")
