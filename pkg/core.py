"""Instance validation and the unit-mass partial matching objective.

The objective of a partial assignment π is

    TC(π) = <π, C> + ρ (<α, 1 - π 1_n> + <β, 1 - πᵀ 1_m>)

i.e. the transported cost plus a weighted total-variation penalty on the
unmatched source and target mass.
"""

import dataclasses
import math
from typing import Iterable, Optional

import numpy as np
from loguru import logger

from errors import ValidationError
from models import Instance, PartialAssignment


def make_instance(
    cost,
    alpha,
    beta,
    rho: float,
    ground_truth: Optional[Iterable] = None,
) -> Instance:
    """
    Build and validate an instance from plain arrays.

    Args:
        cost: m x n cost matrix
        alpha: Source matching biases (length m)
        beta: Target matching biases (length n)
        rho: Unbalancedness parameter
        ground_truth: Optional 0-based (i, j) pairs

    Returns:
        Validated Instance
    """
    alpha = np.asarray(alpha, dtype=np.float64).reshape(-1)
    beta = np.asarray(beta, dtype=np.float64).reshape(-1)
    m, n = len(alpha), len(beta)
    cost = np.asarray(cost, dtype=np.float64)
    if cost.size == 0:
        cost = cost.reshape(m, n)

    truth = None
    if ground_truth is not None:
        truth = (
            ground_truth
            if isinstance(ground_truth, PartialAssignment)
            else PartialAssignment(m, n, frozenset(ground_truth))
        )

    return validate_instance(
        Instance(m=m, n=n, cost=cost, alpha=alpha, beta=beta, rho=rho, ground_truth=truth)
    )


def validate_instance(raw: Instance) -> Instance:
    """Return the instance unchanged if all invariants hold, raise otherwise."""
    if raw.m < 0 or raw.n < 0:
        raise ValidationError(f"dimension mismatch: negative size {raw.m}x{raw.n}")
    if raw.cost.shape != (raw.m, raw.n):
        raise ValidationError(
            f"dimension mismatch: cost is {raw.cost.shape}, expected ({raw.m}, {raw.n})"
        )
    if raw.alpha.shape != (raw.m,):
        raise ValidationError(f"dimension mismatch: alpha has {raw.alpha.size} entries, m={raw.m}")
    if raw.beta.shape != (raw.n,):
        raise ValidationError(f"dimension mismatch: beta has {raw.beta.size} entries, n={raw.n}")

    for name, values in (("cost", raw.cost), ("alpha", raw.alpha), ("beta", raw.beta)):
        if not np.all(np.isfinite(values)):
            raise ValidationError(f"non-finite entry in {name}")

    if np.any(raw.alpha < 0):
        raise ValidationError("negative bias in alpha")
    if np.any(raw.beta < 0):
        raise ValidationError("negative bias in beta")
    if not math.isfinite(raw.rho) or raw.rho <= 0:
        raise ValidationError(f"rho must be positive, got {raw.rho}")

    truth = raw.ground_truth
    if truth is not None and (truth.m, truth.n) != (raw.m, raw.n):
        raise ValidationError(
            f"dimension mismatch: ground truth is {truth.m}x{truth.n}, instance is {raw.m}x{raw.n}"
        )
    return raw


def _check_assignment(inst: Instance, pi: PartialAssignment):
    if (pi.m, pi.n) != (inst.m, inst.n):
        raise ValidationError(
            f"dimension mismatch: assignment is {pi.m}x{pi.n}, instance is {inst.m}x{inst.n}"
        )


def transported_cost(inst: Instance, pi: PartialAssignment) -> float:
    """<π, C>, summed over pairs in row-major order."""
    _check_assignment(inst, pi)
    return math.fsum(float(inst.cost[i, j]) for i, j in pi.sorted_pairs())


def unmatched_mass(inst: Instance, pi: PartialAssignment) -> float:
    """<α, 1 - π 1_n> + <β, 1 - πᵀ 1_m>."""
    _check_assignment(inst, pi)
    rows = {i for i, _ in pi.pairs}
    cols = {j for _, j in pi.pairs}
    free_alpha = math.fsum(float(a) for i, a in enumerate(inst.alpha) if i not in rows)
    free_beta = math.fsum(float(b) for j, b in enumerate(inst.beta) if j not in cols)
    return free_alpha + free_beta


def unmatch_penalty(inst: Instance, pi: PartialAssignment) -> float:
    return inst.rho * unmatched_mass(inst, pi)


def total_cost(inst: Instance, pi: PartialAssignment) -> float:
    """Objective value of a partial assignment: transported cost plus unmatch penalty."""
    return transported_cost(inst, pi) + unmatch_penalty(inst, pi)


def transpose_instance(inst: Instance) -> Instance:
    """Swap the roles of sources and targets."""
    truth = inst.ground_truth.flipped() if inst.ground_truth is not None else None
    return dataclasses.replace(
        inst,
        m=inst.n,
        n=inst.m,
        cost=inst.cost.T,
        alpha=inst.beta,
        beta=inst.alpha,
        ground_truth=truth,
    )


def with_rho(inst: Instance, rho: float) -> Instance:
    """Copy of the instance with another unbalancedness parameter."""
    logger.debug(f"Re-parameterizing {inst!r} with rho={rho:g}")
    return validate_instance(dataclasses.replace(inst, rho=rho))
