"""Models package."""

from .problem import (
    AffinityMatrix,
    Instance,
    LossInputs,
    PartialAssignment,
    Permutation,
    PlantSpec,
    SinkhornConfig,
)
from .report import (
    BalancedEmbedding,
    BenchRow,
    CrossCheck,
    Embedding,
    LambdaRow,
    LossReport,
    MatchMetrics,
    SinkhornResult,
    SolveReport,
    SweepRow,
)

__all__ = [
    "AffinityMatrix",
    "BalancedEmbedding",
    "BenchRow",
    "CrossCheck",
    "Embedding",
    "Instance",
    "LambdaRow",
    "LossInputs",
    "LossReport",
    "MatchMetrics",
    "PartialAssignment",
    "Permutation",
    "PlantSpec",
    "SinkhornConfig",
    "SinkhornResult",
    "SolveReport",
    "SweepRow",
]
