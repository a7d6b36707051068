"""Result-side data models produced by the solver, loss and metrics modules."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .problem import PartialAssignment


@dataclass(frozen=True, eq=False)
class Embedding:
    """Square LAP cost matrix C̄ built from an instance with m <= n.

    Rows below m are dummy rows priced at ρ(α* + β_j).
    """

    cbar: np.ndarray
    alpha_star: float
    mask: np.ndarray

    @property
    def m(self) -> int:
        return self.mask.shape[0]

    @property
    def n(self) -> int:
        return self.cbar.shape[0]


@dataclass(frozen=True, eq=False)
class BalancedEmbedding:
    """Balanced transport reformulation over (m+n) x (m+n) nodes."""

    chat: np.ndarray
    offset: float
    mu_hat: np.ndarray
    nu_hat: np.ndarray
    total_mass: float


@dataclass(frozen=True)
class SolveReport:
    """Optimal partial assignment plus its objective breakdown.

    assignment and the cost terms refer to the caller's orientation.
    alpha_star, feasible_pairs and lap_value describe the embedding that was
    solved, which is the transpose when transposed is set, so
    lap_value = total_cost + ρ (max(m, n) - min(m, n)) α* in either case.
    """

    assignment: PartialAssignment
    total_cost: float
    transported_cost: float
    unmatch_penalty: float
    alpha_star: float
    feasible_pairs: int
    lap_value: float
    transposed: bool = False

    @property
    def matched_count(self) -> int:
        return len(self.assignment)


@dataclass(frozen=True)
class CrossCheck:
    """Outcome of comparing the balanced reformulation with the solver."""

    lhs: float
    rhs: float
    ok: bool


@dataclass(frozen=True, eq=False)
class SinkhornResult:
    """Normalized matrix with convergence diagnostics."""

    matrix: np.ndarray
    iterations: int
    residual: float
    converged: bool


@dataclass(frozen=True, eq=False)
class LossReport:
    """Partial matching loss values and, when requested, gradients."""

    l_cost: float
    l_bias: float
    l_total: float
    active_pairs: int
    grad_cost: Optional[np.ndarray] = None
    grad_alpha: Optional[np.ndarray] = None
    grad_beta: Optional[np.ndarray] = None


@dataclass(frozen=True)
class MatchMetrics:
    """Matching quality against a ground truth."""

    precision: float
    recall: float
    f1: float
    node_correctness: float
    partiality_error: float
    mismatching_error: float
    total_error: float


@dataclass(frozen=True)
class SweepRow:
    """One ρ value of a sensitivity sweep."""

    rho: float
    matched_count: int
    total_cost: float
    unmatched_mass: float
    f1: Optional[float] = None


@dataclass(frozen=True)
class LambdaRow:
    """One λ value of a loss sweep."""

    lam: float
    l_cost: float
    l_bias: float
    l_total: float


@dataclass(frozen=True)
class BenchRow:
    """Timing summary for one problem size."""

    n: int
    mean_ms: float
    p95_ms: float
    head_ms: float
    ratio: Optional[float] = None
