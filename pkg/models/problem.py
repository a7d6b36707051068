"""Problem-side data models: instances, assignments and solver settings.

Indices are 0-based everywhere in memory. Files and user-facing
documents use 1-based indices; conversion happens in instance_file.py only.
"""

from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from errors import ValidationError


def _frozen_array(values, ndim: int) -> np.ndarray:
    """Copy values into a read-only float64 array of the given rank."""
    array = np.array(values, dtype=np.float64)
    if array.size == 0 and array.ndim != ndim:
        array = array.reshape((0,) * ndim)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class PartialAssignment:
    """An injective partial map from source rows to target columns.

    Equivalently a 0/1 matrix with at most one 1 per row and per column.
    """

    m: int
    n: int
    pairs: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        pairs = frozenset((int(i), int(j)) for i, j in self.pairs)
        object.__setattr__(self, "pairs", pairs)

        seen_rows: set[int] = set()
        seen_cols: set[int] = set()
        for i, j in sorted(pairs):
            if not (0 <= i < self.m and 0 <= j < self.n):
                raise ValidationError(
                    f"index out of range: ({i + 1}, {j + 1}) for {self.m}x{self.n}"
                )
            if i in seen_rows:
                raise ValidationError(f"duplicate source index: {i + 1}")
            if j in seen_cols:
                raise ValidationError(f"duplicate target index: {j + 1}")
            seen_rows.add(i)
            seen_cols.add(j)

    @classmethod
    def empty(cls, m: int, n: int) -> "PartialAssignment":
        return cls(m, n, frozenset())

    @classmethod
    def from_one_based(cls, m: int, n: int, pairs: Iterable) -> "PartialAssignment":
        """Build from 1-based (i, j) pairs as they appear in files."""
        converted = []
        for pair in pairs:
            if len(pair) != 2:
                raise ValidationError(f"malformed pair: {pair!r}")
            i, j = pair
            if isinstance(i, bool) or isinstance(j, bool) or int(i) != i or int(j) != j:
                raise ValidationError(f"pair indices must be integers: {pair!r}")
            converted.append((int(i) - 1, int(j) - 1))
        if len(set(converted)) != len(converted):
            duplicate = next(p for p in converted if converted.count(p) > 1)
            raise ValidationError(f"duplicate source index: {duplicate[0] + 1}")
        return cls(m, n, frozenset(converted))

    def to_one_based(self) -> list[list[int]]:
        return [[i + 1, j + 1] for i, j in self.sorted_pairs()]

    def sorted_pairs(self) -> list[tuple[int, int]]:
        """Pairs in row-major order."""
        return sorted(self.pairs)

    def partner_map(self) -> dict[int, int]:
        return dict(self.pairs)

    def to_matrix(self) -> np.ndarray:
        matrix = np.zeros((self.m, self.n), dtype=np.float64)
        for i, j in self.pairs:
            matrix[i, j] = 1.0
        return matrix

    def row_marginal(self) -> np.ndarray:
        """π 1_n as a 0/1 vector over sources."""
        marginal = np.zeros(self.m, dtype=np.float64)
        for i, _ in self.pairs:
            marginal[i] = 1.0
        return marginal

    def col_marginal(self) -> np.ndarray:
        """πᵀ 1_m as a 0/1 vector over targets."""
        marginal = np.zeros(self.n, dtype=np.float64)
        for _, j in self.pairs:
            marginal[j] = 1.0
        return marginal

    def flipped(self) -> "PartialAssignment":
        """The same matching seen from the target side."""
        return PartialAssignment(self.n, self.m, frozenset((j, i) for i, j in self.pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def __contains__(self, pair) -> bool:
        return tuple(pair) in self.pairs

    def __repr__(self) -> str:
        shown = ", ".join(f"({i + 1},{j + 1})" for i, j in self.sorted_pairs()[:8])
        more = " ..." if len(self.pairs) > 8 else ""
        return f"PartialAssignment({self.m}x{self.n}, {{{shown}{more}}})"


@dataclass(frozen=True)
class Permutation:
    """A bijection on {0..n-1}; mapping[i] is the column of row i."""

    mapping: tuple = ()

    def __post_init__(self):
        mapping = tuple(int(j) for j in self.mapping)
        object.__setattr__(self, "mapping", mapping)
        if sorted(mapping) != list(range(len(mapping))):
            raise ValidationError(f"not a permutation: {mapping}")

    @property
    def n(self) -> int:
        return len(self.mapping)

    def __getitem__(self, row: int) -> int:
        return self.mapping[row]

    def __len__(self) -> int:
        return len(self.mapping)


@dataclass(frozen=True, eq=False)
class Instance:
    """A partial graph matching problem with unit node masses.

    Attributes:
        m: Number of source nodes
        n: Number of target nodes
        cost: m x n cost matrix C
        alpha: Matching bias of each source node
        beta: Matching bias of each target node
        rho: Unbalancedness parameter, trades transport cost against unmatched mass
        ground_truth: Optional reference matching
    """

    m: int
    n: int
    cost: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    rho: float
    ground_truth: Optional[PartialAssignment] = None

    def __post_init__(self):
        object.__setattr__(self, "cost", _frozen_array(self.cost, 2))
        object.__setattr__(self, "alpha", _frozen_array(self.alpha, 1))
        object.__setattr__(self, "beta", _frozen_array(self.beta, 1))
        object.__setattr__(self, "rho", float(self.rho))

    @property
    def thresholds(self) -> np.ndarray:
        """Feasibility thresholds ρ(α_i + β_j)."""
        return self.rho * (self.alpha[:, None] + self.beta[None, :])

    def __repr__(self) -> str:
        truth = f", truth={len(self.ground_truth)}" if self.ground_truth is not None else ""
        return f"Instance(m={self.m}, n={self.n}, rho={self.rho:g}{truth})"


@dataclass(frozen=True)
class SinkhornConfig:
    """Settings of the Sinkhorn normalization."""

    temperature: float = 0.1
    max_iters: int = 200
    tol: float = 1e-6


@dataclass(frozen=True, eq=False)
class AffinityMatrix:
    """Cross-graph node-to-node affinity A (unbounded reals)."""

    values: np.ndarray

    def __post_init__(self):
        values = _frozen_array(self.values, 2)
        if values.ndim != 2:
            raise ValidationError("affinity must be a 2-D matrix")
        if not np.all(np.isfinite(values)):
            raise ValidationError("non-finite entry in affinity")
        object.__setattr__(self, "values", values)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


@dataclass(frozen=True)
class PlantSpec:
    """Recipe for a synthetic instance with a planted partial matching.

    Planted pairs cost `matched_cost`, every other pair is drawn uniformly
    from [base_low, base_high]; Gaussian noise is added and costs are clipped
    to [0, 1].
    """

    m: int
    n: int
    k: int
    noise_sigma: float = 0.0
    base_low: float = 0.7
    base_high: float = 1.0
    matched_cost: float = 0.05
    seed: int = 0
    rho: float = 0.4


@dataclass(frozen=True, eq=False)
class LossInputs:
    """Everything the partial matching loss looks at."""

    cost: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    rho: float
    truth: PartialAssignment
    lam: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "cost", _frozen_array(self.cost, 2))
        object.__setattr__(self, "alpha", _frozen_array(self.alpha, 1))
        object.__setattr__(self, "beta", _frozen_array(self.beta, 1))

    @classmethod
    def from_instance(
        cls, instance: Instance, lam: float = 0.5, fixed_biases: bool = False
    ) -> "LossInputs":
        """
        Collect loss inputs from an instance carrying a ground truth.

        Args:
            instance: Instance with ground_truth set
            lam: Weight of the bias term
            fixed_biases: Use α = 1, β = 1 and drop the bias term (λ = 0)

        Returns:
            LossInputs
        """
        if instance.ground_truth is None:
            raise ValidationError("loss requires a ground truth matching")
        alpha, beta = instance.alpha, instance.beta
        if fixed_biases:
            alpha = np.ones(instance.m)
            beta = np.ones(instance.n)
            lam = 0.0
        return cls(
            cost=instance.cost,
            alpha=alpha,
            beta=beta,
            rho=instance.rho,
            truth=instance.ground_truth,
            lam=lam,
        )

    @property
    def shape(self) -> tuple[int, int]:
        return self.cost.shape
