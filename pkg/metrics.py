"""Matching quality metrics and the failure-mode split of missed true matches.

Protocol: metrics are computed per instance; averages over a collection of
instances are plain means of the per-instance values.
"""

from loguru import logger

import core
from errors import ValidationError
from models import Instance, MatchMetrics, PartialAssignment


def _check_pair(pred: PartialAssignment, truth: PartialAssignment):
    if (pred.m, pred.n) != (truth.m, truth.n):
        raise ValidationError(
            f"dimension mismatch: prediction is {pred.m}x{pred.n}, truth is {truth.m}x{truth.n}"
        )
    if len(truth) == 0:
        raise ValidationError("undefined recall: ground truth has no matches")


def match_f1(pred: PartialAssignment, truth: PartialAssignment) -> tuple[float, float, float]:
    """Precision, recall and F1 of predicted pairs against true pairs."""
    _check_pair(pred, truth)
    hits = len(pred.pairs & truth.pairs)
    precision = hits / len(pred) if len(pred) else 0.0
    recall = hits / len(truth)
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return precision, recall, f1


def node_correctness(pred: PartialAssignment, truth: PartialAssignment) -> float:
    """Share of truly matched source nodes whose predicted partner is the true one."""
    _check_pair(pred, truth)
    partners = pred.partner_map()
    correct = sum(1 for i, j in truth.pairs if partners.get(i) == j)
    return correct / len(truth)


def error_decomposition(
    pred: PartialAssignment, truth: PartialAssignment, inst: Instance
) -> tuple[float, float, float]:
    """
    Split the missed true matches into partiality and mismatching errors.

    A true pair above its feasibility threshold ρ(α_i + β_j) counts as a
    partiality error: the solver can never return it. A feasible true pair
    missing from the prediction counts as a mismatching error.

    Returns:
        (partiality, mismatching, total) as fractions of the true pairs
    """
    _check_pair(pred, truth)
    inst = core.validate_instance(inst)
    if (inst.m, inst.n) != (truth.m, truth.n):
        raise ValidationError("dimension mismatch: instance and matchings")

    thresholds = inst.thresholds
    infeasible = 0
    missed = 0
    for i, j in truth.pairs:
        if inst.cost[i, j] > thresholds[i, j]:
            infeasible += 1
        elif (i, j) not in pred:
            missed += 1

    partiality = infeasible / len(truth)
    mismatching = missed / len(truth)
    return partiality, mismatching, partiality + mismatching


def evaluate(pred: PartialAssignment, truth: PartialAssignment, inst: Instance) -> MatchMetrics:
    precision, recall, f1 = match_f1(pred, truth)
    partiality, mismatching, total = error_decomposition(pred, truth, inst)
    return MatchMetrics(
        precision=precision,
        recall=recall,
        f1=f1,
        node_correctness=node_correctness(pred, truth),
        partiality_error=partiality,
        mismatching_error=mismatching,
        total_error=total,
    )


def average_metrics(results: list[MatchMetrics]) -> MatchMetrics:
    """Mean of per-instance metrics."""
    if not results:
        raise ValidationError("no metrics to average")
    count = len(results)

    def mean(name: str) -> float:
        return sum(getattr(r, name) for r in results) / count

    partiality = mean("partiality_error")
    mismatching = mean("mismatching_error")
    logger.debug(f"Averaged metrics over {count} instances")
    return MatchMetrics(
        precision=mean("precision"),
        recall=mean("recall"),
        f1=mean("f1"),
        node_correctness=mean("node_correctness"),
        partiality_error=partiality,
        mismatching_error=mismatching,
        total_error=partiality + mismatching,
    )
