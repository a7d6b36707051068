"""From a cross-graph affinity matrix to matching costs and biases.

The matching head normalizes the affinity A with Sinkhorn iterations into
S with S 1_n = 1_m and Sᵀ 1_m <= 1_n, takes C = 1 - S as the cost, and
derives per-node matching biases from the positive part of A.
"""

import math

import numpy as np
from loguru import logger
from scipy.special import logsumexp

import core
from errors import ValidationError
from models import AffinityMatrix, Instance, SinkhornConfig, SinkhornResult

RANGE_TOL = 1e-9


def validate_sinkhorn_config(cfg: SinkhornConfig) -> SinkhornConfig:
    if not (cfg.temperature > 0 and math.isfinite(cfg.temperature)):
        raise ValidationError(f"sinkhorn temperature must be positive, got {cfg.temperature}")
    if int(cfg.max_iters) != cfg.max_iters or cfg.max_iters < 1:
        raise ValidationError(f"sinkhorn max_iters must be a positive integer, got {cfg.max_iters}")
    if not (cfg.tol > 0):
        raise ValidationError(f"sinkhorn tol must be positive, got {cfg.tol}")
    return cfg


def sinkhorn_normalize(A: AffinityMatrix, cfg: SinkhornConfig = SinkhornConfig()) -> SinkhornResult:
    """
    Normalize exp(A / τ) to unit row sums and column sums at most one.

    The m x n affinity is padded with n - m uniform dummy rows, row and
    column normalizations alternate in the log domain until the real rows
    sum to one within tol, the dummy rows are dropped and a final row
    normalization is applied.

    Args:
        A: Affinity with m <= n
        cfg: Temperature, iteration cap and tolerance

    Returns:
        SinkhornResult; converged is False when max_iters ran out
    """
    validate_sinkhorn_config(cfg)
    m, n = A.shape
    if m > n:
        raise ValidationError(f"sinkhorn needs m <= n, got {m}x{n}")
    if m == 0:
        return SinkhornResult(np.zeros((0, n)), iterations=0, residual=0.0, converged=True)

    log_kernel = np.zeros((n, n), dtype=np.float64)
    log_kernel[:m] = A.values / cfg.temperature

    residual = math.inf
    iterations = 0
    for iterations in range(1, int(cfg.max_iters) + 1):
        log_kernel -= logsumexp(log_kernel, axis=1, keepdims=True)
        log_kernel -= logsumexp(log_kernel, axis=0, keepdims=True)
        row_sums = np.exp(log_kernel[:m]).sum(axis=1)
        residual = float(np.abs(row_sums - 1.0).max())
        if residual <= cfg.tol:
            break

    converged = residual <= cfg.tol
    if not converged:
        logger.warning(
            f"Sinkhorn did not converge in {cfg.max_iters} iterations "
            f"(residual {residual:.3e} > tol {cfg.tol:.1e})"
        )
    else:
        logger.debug(f"Sinkhorn converged after {iterations} iterations, residual {residual:.3e}")

    real = log_kernel[:m]
    S = np.exp(real - logsumexp(real, axis=1, keepdims=True))
    return SinkhornResult(matrix=S, iterations=iterations, residual=residual, converged=converged)


def cost_from_affinity(S) -> np.ndarray:
    """C = 1 - S for a normalized affinity S with entries in [0, 1]."""
    S = np.asarray(S, dtype=np.float64)
    if S.size and (S.min() < -RANGE_TOL or S.max() > 1.0 + RANGE_TOL):
        raise ValidationError(
            f"normalized affinity outside [0, 1]: range [{S.min():.3g}, {S.max():.3g}]"
        )
    return 1.0 - S


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-x))


def matching_biases(A: AffinityMatrix, w_rs: float) -> tuple[np.ndarray, np.ndarray]:
    """
    Matching biases α_i = 2(σ(w_rs · r_i) - 0.5) with r_i = max_j max(A_ij, 0).

    β_j is defined the same way over columns. All biases lie in [0, 1).
    """
    if not (w_rs >= 0 and math.isfinite(w_rs)):
        raise ValidationError(f"w_rs must be a nonnegative real, got {w_rs}")
    positive = np.maximum(A.values, 0.0)
    m, n = A.shape
    r_rows = positive.max(axis=1) if n else np.zeros(m)
    r_cols = positive.max(axis=0) if m else np.zeros(n)
    alpha = 2.0 * (_sigmoid(w_rs * r_rows) - 0.5)
    beta = 2.0 * (_sigmoid(w_rs * r_cols) - 0.5)
    return alpha, beta


def derive_instance(
    A: AffinityMatrix,
    w_rs: float,
    rho: float,
    cfg: SinkhornConfig = SinkhornConfig(),
    ground_truth=None,
) -> tuple[Instance, SinkhornResult]:
    """
    Run the matching head: costs from Sinkhorn, biases from the affinity.

    An affinity with more rows than columns is normalized on its transpose, so
    its columns rather than its rows sum to one.

    Returns:
        (validated Instance, Sinkhorn diagnostics)
    """
    m, n = A.shape
    if m > n:
        result = sinkhorn_normalize(AffinityMatrix(A.values.T), cfg)
        S = result.matrix.T
    else:
        result = sinkhorn_normalize(A, cfg)
        S = result.matrix

    alpha, beta = matching_biases(A, w_rs)
    instance = core.make_instance(cost_from_affinity(S), alpha, beta, rho, ground_truth)
    return instance, result
