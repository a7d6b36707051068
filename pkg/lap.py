"""Exact solver for the square linear sum assignment problem.

Shortest augmenting path Hungarian method with row/column potentials,
O(n^3) in the worst case. The inner Dijkstra scan over columns is
vectorized with numpy; the outer loop adds one row per augmentation.

Ties are broken towards the lowest index: column reduction prefers the
lowest row, the scan prefers the lowest column. Identical input therefore
always yields the identical permutation.
"""

import math

import numpy as np
from loguru import logger

from errors import ValidationError
from models import Permutation


def _as_square(cost) -> np.ndarray:
    matrix = np.asarray(cost, dtype=np.float64)
    if matrix.size == 0:
        return matrix.reshape(0, 0)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValidationError(f"LAP needs a square matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise ValidationError("non-finite entry in LAP cost matrix")
    return matrix


def _column_reduction(matrix: np.ndarray):
    """Initial dual v_j = min_i C_ij and a greedy zero-reduced-cost matching."""
    n = matrix.shape[0]
    v = matrix.min(axis=0)
    best_rows = matrix.argmin(axis=0)

    # index n is the virtual column used as the root of each search
    row_of_col = np.full(n + 1, -1, dtype=np.int64)
    row_taken = np.zeros(n, dtype=bool)
    for col in range(n):
        row = best_rows[col]
        if not row_taken[row]:
            row_taken[row] = True
            row_of_col[col] = row

    return row_of_col, np.zeros(n, dtype=np.float64), v.astype(np.float64)


def _augment(matrix, row, row_of_col, u, v):
    """Grow a shortest augmenting path from a free row and flip it."""
    n = matrix.shape[0]
    min_slack = np.full(n, np.inf)
    way = np.full(n, n, dtype=np.int64)
    used = np.zeros(n + 1, dtype=bool)
    used_cols = [n]

    row_of_col[n] = row
    current = n
    while True:
        used[current] = True
        i0 = row_of_col[current]
        free = ~used[:n]

        reduced = matrix[i0] - u[i0] - v
        better = free & (reduced < min_slack)
        min_slack[better] = reduced[better]
        way[better] = current

        candidates = np.where(free, min_slack, np.inf)
        nxt = int(np.argmin(candidates))
        delta = candidates[nxt]

        cols = np.asarray(used_cols)
        u[row_of_col[cols]] += delta
        v[cols[1:]] -= delta
        min_slack[free] -= delta

        current = nxt
        used_cols.append(current)
        if row_of_col[current] == -1:
            break

    while current != n:
        prev = way[current]
        row_of_col[current] = row_of_col[prev]
        current = prev


def solve_lap(cost) -> tuple[Permutation, float]:
    """
    Solve min_σ Σ_i C[i, σ(i)] over permutations σ.

    Args:
        cost: n x n matrix with finite entries

    Returns:
        (optimal permutation, objective value)
    """
    matrix = _as_square(cost)
    n = matrix.shape[0]
    if n == 0:
        return Permutation(()), 0.0

    row_of_col, u, v = _column_reduction(matrix)
    assigned = set(int(r) for r in row_of_col[:n] if r >= 0)
    free_rows = [row for row in range(n) if row not in assigned]
    logger.debug(f"LAP n={n}: {n - len(free_rows)} rows placed by column reduction")

    for row in free_rows:
        _augment(matrix, row, row_of_col, u, v)

    col_of_row = np.empty(n, dtype=np.int64)
    col_of_row[row_of_col[:n]] = np.arange(n)
    perm = Permutation(tuple(col_of_row.tolist()))
    return perm, assignment_cost(matrix, perm)


def assignment_cost(cost, perm: Permutation) -> float:
    """Σ_i C[i, perm[i]] with correctly rounded summation."""
    matrix = np.asarray(cost, dtype=np.float64)
    if matrix.shape != (perm.n, perm.n):
        raise ValidationError(
            f"dimension mismatch: permutation of size {perm.n} on matrix {matrix.shape}"
        )
    return math.fsum(float(matrix[i, j]) for i, j in enumerate(perm.mapping))
