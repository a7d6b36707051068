"""Brute-force references for the partial matching objective and the LAP.

Exhaustive enumeration, kept deliberately naive: the solver is only trusted
once it agrees with these on small instances.
"""

import itertools
import math
from typing import Iterator

import numpy as np
from loguru import logger

import core
from errors import SizeLimitError, ValidationError
from models import Instance, PartialAssignment, Permutation

MAX_COUNT = 2**63 - 1
MAX_CANDIDATES = 10_000_000
MAX_LAP_SIZE = 8


def count_partial_assignments(m: int, n: int) -> int:
    """|M| = Σ_k C(m, k) C(n, k) k!"""
    if m < 0 or n < 0:
        raise ValidationError(f"sizes must be nonnegative, got {m}x{n}")
    total = sum(math.comb(m, k) * math.comb(n, k) * math.factorial(k) for k in range(min(m, n) + 1))
    if total > MAX_COUNT:
        raise SizeLimitError(f"|M| for {m}x{n} exceeds 2^63 - 1")
    return total


def enumerate_partial_assignments(m: int, n: int) -> Iterator[tuple[tuple[int, int], ...]]:
    """
    Yield every partial assignment as a tuple of 0-based pairs.

    Pairs are listed by source row. Order: by cardinality ascending, then the
    pair tuples lexicographically.
    """

    def extend(k: int, first_row: int, used: frozenset) -> Iterator[tuple[tuple[int, int], ...]]:
        if k == 0:
            yield ()
            return
        for i in range(first_row, m - k + 1):
            for j in range(n):
                if j in used:
                    continue
                for rest in extend(k - 1, i + 1, used | {j}):
                    yield ((i, j),) + rest

    for k in range(min(m, n) + 1):
        yield from extend(k, 0, frozenset())


def brute_force_pgm(inst: Instance, max_candidates: int = MAX_CANDIDATES) -> tuple[PartialAssignment, float]:
    """
    Minimize the partial matching objective by enumerating every candidate.

    Ties keep the first candidate in enumeration order.

    Returns:
        (minimizer, objective value)
    """
    inst = core.validate_instance(inst)
    count = count_partial_assignments(inst.m, inst.n)
    if count > max_candidates:
        raise SizeLimitError(f"{count} candidates exceed the oracle guard of {max_candidates}")

    # objective = ρ(||α||₁ + ||β||₁) + Σ_pairs (C_ij - ρ(α_i + β_j))
    reduced = (inst.cost - inst.thresholds).tolist()
    base = inst.rho * (math.fsum(inst.alpha.tolist()) + math.fsum(inst.beta.tolist()))

    best_pairs: tuple = ()
    best_value = math.inf
    evaluated = 0
    for pairs in enumerate_partial_assignments(inst.m, inst.n):
        evaluated += 1
        value = base + math.fsum(reduced[i][j] for i, j in pairs)
        if value < best_value:
            best_value, best_pairs = value, pairs

    logger.debug(f"Oracle evaluated {evaluated} partial assignments for {inst!r}")
    best = PartialAssignment(inst.m, inst.n, frozenset(best_pairs))
    return best, core.total_cost(inst, best)


def brute_force_lap(cost, max_size: int = MAX_LAP_SIZE) -> tuple[Permutation, float]:
    """Minimize Σ_i C[i, σ(i)] over all n! permutations."""
    matrix = np.asarray(cost, dtype=np.float64)
    if matrix.size == 0:
        return Permutation(()), 0.0
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValidationError(f"LAP needs a square matrix, got shape {matrix.shape}")
    n = matrix.shape[0]
    if n > max_size:
        raise SizeLimitError(f"brute-force LAP limited to n <= {max_size}, got {n}")

    rows = matrix.tolist()
    best_mapping, best_value = None, math.inf
    for mapping in itertools.permutations(range(n)):
        value = math.fsum(rows[i][j] for i, j in enumerate(mapping))
        if value < best_value:
            best_mapping, best_value = mapping, value
    return Permutation(best_mapping), best_value
