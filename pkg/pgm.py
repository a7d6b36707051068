"""Partial graph matching solved exactly through a linear sum assignment.

For an instance with m <= n the n x n matrix C̄ keeps feasible costs,
replaces infeasible ones by their threshold ρ(α_i + β_j) and prices the
n - m dummy rows at ρ(α* + β_j) with α* > max α. Any permutation of C̄
restricted to the first m rows and to feasible pairs is a partial
assignment, and for every permutation π̄

    <π̄, C̄> = TC(h(π̄)) + ρ (n - m) α*

so an optimal permutation yields an optimal partial assignment.
"""

import math
from typing import Optional

import numpy as np
from loguru import logger

import core
from errors import SizeLimitError, ValidationError
from lap import assignment_cost, solve_lap
from models import (
    BalancedEmbedding,
    CrossCheck,
    Embedding,
    Instance,
    PartialAssignment,
    Permutation,
    SolveReport,
)

# Largest m + n accepted by the balanced cross-check
BALANCED_MAX_NODES = 12
CROSS_CHECK_TOL = 1e-9


def feasibility_mask(inst: Instance) -> np.ndarray:
    """mask[i, j] is True iff C_ij <= ρ(α_i + β_j)."""
    return inst.cost <= inst.thresholds


def build_embedding(inst: Instance) -> Embedding:
    """Build the padded square cost matrix C̄ of an instance with m <= n."""
    if inst.m > inst.n:
        raise ValidationError(f"embedding needs m <= n, got {inst.m}x{inst.n}")

    mask = feasibility_mask(inst)
    alpha_star = (float(inst.alpha.max()) if inst.m else 0.0) + 1.0

    cbar = np.empty((inst.n, inst.n), dtype=np.float64)
    cbar[: inst.m] = np.where(mask, inst.cost, inst.thresholds)
    cbar[inst.m :] = inst.rho * (alpha_star + inst.beta)[None, :]

    mask.setflags(write=False)
    cbar.setflags(write=False)
    return Embedding(cbar=cbar, alpha_star=alpha_star, mask=mask)


def restrict_assignment(perm: Permutation, inst: Instance) -> PartialAssignment:
    """Drop dummy rows and infeasible pairs of a permutation of C̄."""
    if perm.n != inst.n or inst.m > inst.n:
        raise ValidationError(
            f"dimension mismatch: permutation of size {perm.n} for {inst.m}x{inst.n}"
        )
    mask = feasibility_mask(inst)
    pairs = frozenset((i, perm[i]) for i in range(inst.m) if mask[i, perm[i]])
    return PartialAssignment(inst.m, inst.n, pairs)


def lap_objective(embedding: Embedding, perm: Permutation) -> float:
    """<π̄, C̄> for any permutation, optimal or not."""
    return assignment_cost(embedding.cbar, perm)


def _report(
    inst: Instance,
    assignment: PartialAssignment,
    embedding: Embedding,
    lap_value: float,
    transposed: bool,
) -> SolveReport:
    transported = core.transported_cost(inst, assignment)
    penalty = core.unmatch_penalty(inst, assignment)
    return SolveReport(
        assignment=assignment,
        total_cost=transported + penalty,
        transported_cost=transported,
        unmatch_penalty=penalty,
        alpha_star=embedding.alpha_star,
        feasible_pairs=int(embedding.mask.sum()),
        lap_value=lap_value,
        transposed=transposed,
    )


def solve(inst: Instance, allow_transpose: bool = True) -> SolveReport:
    """
    Find a minimum-cost partial assignment.

    Instances with m > n are solved on their transpose and the result is
    flipped back, so the report always refers to the caller's orientation.
    alpha_star, feasible_pairs and lap_value describe the embedding that was
    actually solved.

    Args:
        inst: Instance to solve
        allow_transpose: When False, m > n is rejected instead of transposed

    Returns:
        SolveReport
    """
    inst = core.validate_instance(inst)

    transposed = inst.m > inst.n
    if transposed and not allow_transpose:
        raise ValidationError(f"m > n ({inst.m}x{inst.n}) requires transpose policy 'auto'")
    oriented = core.transpose_instance(inst) if transposed else inst

    embedding = build_embedding(oriented)
    perm, lap_value = solve_lap(embedding.cbar)
    assignment = restrict_assignment(perm, oriented)
    if transposed:
        assignment = assignment.flipped()

    logger.debug(
        f"Solved {inst!r}: {len(assignment)} pairs, "
        f"{int(embedding.mask.sum())} feasible, LAP value {lap_value:.6g}"
    )
    return _report(inst, assignment, embedding, lap_value, transposed)


def build_balanced_embedding(
    inst: Instance,
    mu: Optional[np.ndarray] = None,
    nu: Optional[np.ndarray] = None,
    total_mass: Optional[float] = None,
) -> BalancedEmbedding:
    """
    Build the balanced transport reformulation of the partial problem.

    Ĉ has C_ij - ρ(α_i + β_j) on the top-left m x n block and zeros
    elsewhere. The extended marginals give the n dummy rows
    (K - ||μ||₁)/n each and the m dummy columns (K - ||ν||₁)/m each.

    Args:
        inst: Validated instance
        mu: Source masses (unit by default)
        nu: Target masses (unit by default)
        total_mass: K >= ||μ||₁ + ||ν||₁ (equality by default)

    Returns:
        BalancedEmbedding
    """
    m, n = inst.m, inst.n
    mu = np.ones(m) if mu is None else np.asarray(mu, dtype=np.float64)
    nu = np.ones(n) if nu is None else np.asarray(nu, dtype=np.float64)
    if mu.shape != (m,) or nu.shape != (n,):
        raise ValidationError("dimension mismatch: mass vectors")
    if np.any(mu < 0) or np.any(nu < 0):
        raise ValidationError("negative mass")

    mass_mu, mass_nu = float(mu.sum()), float(nu.sum())
    if total_mass is None:
        total_mass = mass_mu + mass_nu
    if total_mass < mass_mu + mass_nu:
        raise ValidationError(
            f"total mass {total_mass} below ||mu|| + ||nu|| = {mass_mu + mass_nu}"
        )

    size = m + n
    chat = np.zeros((size, size), dtype=np.float64)
    chat[:m, :n] = inst.cost - inst.thresholds

    mu_hat = np.concatenate([mu, np.full(n, (total_mass - mass_mu) / n if n else 0.0)])
    nu_hat = np.concatenate([nu, np.full(m, (total_mass - mass_nu) / m if m else 0.0)])
    offset = inst.rho * (float(inst.alpha @ mu) + float(inst.beta @ nu))
    return BalancedEmbedding(
        chat=chat, offset=offset, mu_hat=mu_hat, nu_hat=nu_hat, total_mass=total_mass
    )


def balanced_cross_check(inst: Instance, max_nodes: int = BALANCED_MAX_NODES) -> CrossCheck:
    """
    Solve the unit-mass balanced reformulation and compare it with solve().

    With unit masses the coupling polytope is the Birkhoff polytope, so a
    permutation of Ĉ is optimal among all couplings.

    Returns:
        CrossCheck(lhs = min <π̂, Ĉ> + offset, rhs = solver total cost, ok)
    """
    inst = core.validate_instance(inst)
    if inst.m + inst.n > max_nodes:
        raise SizeLimitError(f"balanced cross-check limited to m + n <= {max_nodes}")

    balanced = build_balanced_embedding(inst)
    _, value = solve_lap(balanced.chat)
    lhs = value + balanced.offset
    rhs = solve(inst).total_cost
    ok = math.isclose(lhs, rhs, rel_tol=0.0, abs_tol=CROSS_CHECK_TOL)
    if not ok:
        logger.warning(f"Balanced cross-check mismatch on {inst!r}: {lhs!r} vs {rhs!r}")
    return CrossCheck(lhs=lhs, rhs=rhs, ok=ok)
