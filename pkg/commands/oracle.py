"""`oracle`: solver versus brute force on random small instances."""

import argparse
from dataclasses import dataclass

import numpy as np
from loguru import logger

import core
import oracle
import pgm
from config_loader import get_int
from errors import CheckError, ValidationError
from generator import random_instance
from models import Instance
from workers import run_ordered

from .base import BaseCommand

AGREEMENT_TOL = 1e-9


@dataclass(frozen=True)
class OracleRow:
    index: int
    m: int
    n: int
    rho: float
    solver_cost: float
    oracle_cost: float
    matched_count: int
    cross_check: bool
    ok: bool
    reason: str = ""


def check_instance(
    index: int,
    inst: Instance,
    max_candidates: int,
    balanced_max_nodes: int,
    max_lap_size: int,
) -> OracleRow:
    """Compare one solve with every reference the instance admits."""
    report = pgm.solve(inst)
    _, best = oracle.brute_force_pgm(inst, max_candidates=max_candidates)

    thresholds = inst.thresholds
    pairs = report.assignment.sorted_pairs()
    rows_used = {i for i, _ in pairs}
    cols_used = {j for _, j in pairs}
    small, large = sorted((inst.m, inst.n))

    reasons = []
    if abs(report.total_cost - best) > AGREEMENT_TOL:
        reasons.append(f"objective {report.total_cost!r} != oracle {best!r}")
    if any(inst.cost[i, j] > thresholds[i, j] for i, j in pairs):
        reasons.append("matched pair above its threshold")
    free = [(p, q) for p in range(inst.m) if p not in rows_used for q in range(inst.n) if q not in cols_used]
    if any(inst.cost[p, q] < thresholds[p, q] for p, q in free):
        reasons.append("profitable pair left unmatched")
    expected_lap = report.total_cost + inst.rho * (large - small) * report.alpha_star
    if abs(report.lap_value - expected_lap) > AGREEMENT_TOL * max(1.0, abs(expected_lap)):
        reasons.append(f"LAP value {report.lap_value!r} != {expected_lap!r}")
    if large <= max_lap_size:
        oriented = core.transpose_instance(inst) if report.transposed else inst
        _, lap_best = oracle.brute_force_lap(pgm.build_embedding(oriented).cbar, max_size=max_lap_size)
        if abs(report.lap_value - lap_best) > AGREEMENT_TOL:
            reasons.append(f"LAP value {report.lap_value!r} != enumerated {lap_best!r}")

    cross = True
    if inst.m + inst.n <= balanced_max_nodes:
        cross = pgm.balanced_cross_check(inst, max_nodes=balanced_max_nodes).ok
        if not cross:
            reasons.append("balanced reformulation disagrees")

    return OracleRow(
        index=index,
        m=inst.m,
        n=inst.n,
        rho=inst.rho,
        solver_cost=report.total_cost,
        oracle_cost=best,
        matched_count=report.matched_count,
        cross_check=cross,
        ok=not reasons,
        reason="; ".join(reasons),
    )


def oracle_corpus(count: int, seed: int, max_m: int, max_n: int) -> list[Instance]:
    """count seeded instances with 1 <= m <= max_m and 1 <= n <= max_n."""
    instances = []
    for child in np.random.SeedSequence(seed).spawn(count):
        rng = np.random.default_rng(child)
        m = int(rng.integers(1, max_m + 1))
        n = int(rng.integers(1, max_n + 1))
        instances.append(random_instance(rng, m, n))
    return instances


class OracleCommand(BaseCommand):
    name = "oracle"
    help = "Check the solver against brute force on random small instances"

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser):
        parser.add_argument("--count", type=int, help="Number of random instances")
        parser.add_argument("--seed", type=int, default=0, help="Corpus seed")
        parser.add_argument("--max-m", type=int, help="Largest source size")
        parser.add_argument("--max-n", type=int, help="Largest target size")
        parser.add_argument("--output", "-o", help="Optional CSV with one row per instance")

    def execute(self, args: argparse.Namespace):
        count = args.count if args.count is not None else get_int(self.config, "oracle", "count")
        max_m = args.max_m if args.max_m is not None else get_int(self.config, "oracle", "max_m")
        max_n = args.max_n if args.max_n is not None else get_int(self.config, "oracle", "max_n")
        if count < 1 or max_m < 1 or max_n < 1:
            raise ValidationError(f"count, max-m and max-n must be positive, got {count}, {max_m}, {max_n}")
        if args.seed < 0:
            raise ValidationError(f"seed must be nonnegative, got {args.seed}")

        max_candidates = get_int(self.config, "oracle", "max_candidates")
        balanced_max_nodes = get_int(self.config, "oracle", "balanced_max_nodes")
        max_lap_size = get_int(self.config, "oracle", "max_lap_size")
        corpus = oracle_corpus(count, args.seed, max_m, max_n)
        logger.info(f"Checking {count} instance(s) up to {max_m}x{max_n} (seed {args.seed})")

        rows = run_ordered(
            lambda item: check_instance(item[0], item[1], max_candidates, balanced_max_nodes, max_lap_size),
            list(enumerate(corpus, 1)),
            max_workers=self.workers,
            label="oracle",
        )
        if args.output:
            self.reporter.save_csv(rows, list(OracleRow.__dataclass_fields__), args.output)

        failures = [row for row in rows if not row.ok]
        for row in failures[:10]:
            logger.warning(f"Instance {row.index} ({row.m}x{row.n}, rho={row.rho:g}): {row.reason}")
        if failures:
            raise CheckError(f"{len(failures)} of {count} instance(s) disagree with the oracle")
        logger.info(f"All {count} instance(s) agree with the oracle")
