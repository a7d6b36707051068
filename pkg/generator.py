"""Synthetic instances and parameter sweeps."""

from typing import Optional, Sequence

import numpy as np
from loguru import logger

import core
import loss
import metrics
import pgm
from errors import ValidationError
from models import Instance, LambdaRow, LossInputs, PlantSpec, SweepRow
from workers import run_ordered

RHO_GRID = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0)


def validate_plant_spec(spec: PlantSpec) -> PlantSpec:
    if spec.m < 0 or spec.n < 0:
        raise ValidationError(f"sizes must be nonnegative, got {spec.m}x{spec.n}")
    if not (0 <= spec.k <= min(spec.m, spec.n)):
        raise ValidationError(f"k={spec.k} must lie in [0, min(m, n)={min(spec.m, spec.n)}]")
    if spec.noise_sigma < 0:
        raise ValidationError(f"noise_sigma must be nonnegative, got {spec.noise_sigma}")
    if spec.base_low > spec.base_high:
        raise ValidationError(f"base_low {spec.base_low} exceeds base_high {spec.base_high}")
    if not (0 <= spec.seed < 2**64):
        raise ValidationError(f"seed must be a 64-bit unsigned integer, got {spec.seed}")
    return spec


def planted_instance(spec: PlantSpec) -> Instance:
    """
    Two-band instance with k planted pairs as ground truth.

    Planted pairs get matched_cost, the others are uniform in
    [base_low, base_high]; N(0, σ²) noise is added and costs are clipped to
    [0, 1]. Biases are all ones. The same seed always yields the same
    instance.
    """
    validate_plant_spec(spec)
    if spec.k < min(spec.m, spec.n) and spec.base_low <= 2 * spec.rho:
        logger.warning(
            f"Background costs from {spec.base_low:g} are feasible at rho={spec.rho:g} "
            f"(threshold {2 * spec.rho:g}); the solver may match pairs outside the plant"
        )
    rng = np.random.default_rng(spec.seed)

    rows = rng.choice(spec.m, size=spec.k, replace=False)
    cols = rng.choice(spec.n, size=spec.k, replace=False)
    cost = rng.uniform(spec.base_low, spec.base_high, size=(spec.m, spec.n))
    cost[rows, cols] = spec.matched_cost
    cost = np.clip(cost + rng.normal(0.0, spec.noise_sigma, size=cost.shape), 0.0, 1.0)

    truth = frozenset(zip(rows.tolist(), cols.tolist()))
    logger.debug(f"Planted {spec.k} pairs in a {spec.m}x{spec.n} instance (seed {spec.seed})")
    return core.make_instance(cost, np.ones(spec.m), np.ones(spec.n), spec.rho, truth)


def random_instance(
    rng: np.random.Generator,
    m: int,
    n: int,
    rho: Optional[float] = None,
    unit_biases: bool = False,
) -> Instance:
    """C ~ U[0,1]; α, β ~ U[0,1] (or ones); ρ from the 0.1..1.0 grid unless given."""
    cost = rng.uniform(0.0, 1.0, size=(m, n))
    if unit_biases:
        alpha, beta = np.ones(m), np.ones(n)
    else:
        alpha, beta = rng.uniform(0.0, 1.0, size=m), rng.uniform(0.0, 1.0, size=n)
    if rho is None:
        rho = float(rng.choice(RHO_GRID))
    return core.make_instance(cost, alpha, beta, rho)


def _check_grid(values: Sequence[float], name: str):
    if not values:
        raise ValidationError(f"{name} grid is empty")
    if any(b < a for a, b in zip(values, values[1:])):
        raise ValidationError(f"{name} grid must be sorted ascending")


def rho_sweep(inst: Instance, rhos: Sequence[float], max_workers: int = 1) -> list[SweepRow]:
    """
    Solve the instance once per ρ.

    Returns:
        One row per ρ with matched count, objective, weighted unmatched mass
        and, when a non-empty ground truth is attached, the F1 score
    """
    rhos = [float(r) for r in rhos]
    _check_grid(rhos, "rho")
    inst = core.validate_instance(inst)
    truth = inst.ground_truth

    def solve_at(rho: float) -> SweepRow:
        variant = core.with_rho(inst, rho)
        report = pgm.solve(variant)
        f1 = None
        if truth is not None and len(truth):
            f1 = metrics.match_f1(report.assignment, truth)[2]
        return SweepRow(
            rho=rho,
            matched_count=report.matched_count,
            total_cost=report.total_cost,
            unmatched_mass=core.unmatched_mass(variant, report.assignment),
            f1=f1,
        )

    return run_ordered(solve_at, rhos, max_workers=max_workers, label="rho")


def lambda_sweep(
    inst: Instance,
    lambdas: Sequence[float],
    max_workers: int = 1,
) -> list[LambdaRow]:
    """Loss components along a λ grid for an instance with ground truth."""
    lambdas = [float(v) for v in lambdas]
    _check_grid(lambdas, "lambda")
    base = LossInputs.from_instance(inst, lam=lambdas[0])

    def evaluate_at(lam: float) -> LambdaRow:
        report = loss.partial_matching_loss(loss.with_lambda(base, lam))
        return LambdaRow(lam=lam, l_cost=report.l_cost, l_bias=report.l_bias, l_total=report.l_total)

    return run_ordered(evaluate_at, lambdas, max_workers=max_workers, label="lambda")

