"""Report generation module.

Turns solver, loss and sweep results into JSON reports and CSV tables.
"""

import csv
import dataclasses
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

from loguru import logger

import metrics
from instance_file import write_canonical
from models import Instance, LossReport, SinkhornResult, SolveReport


class Reporter:
    """Writes solve/loss reports (JSON) and row tables (CSV)."""

    def solve_to_dict(
        self,
        inst: Instance,
        report: SolveReport,
        sinkhorn: Optional[SinkhornResult] = None,
    ) -> dict:
        """
        Report payload of one solve.

        Pairs are 1-based. Quality metrics are added when the instance carries
        a non-empty ground truth; derived biases and Sinkhorn diagnostics are
        added for affinity-mode instances.
        """
        payload: dict[str, Any] = {
            "m": inst.m,
            "n": inst.n,
            "rho": inst.rho,
            "pairs": report.assignment.to_one_based(),
            "matched_count": report.matched_count,
            "total_cost": report.total_cost,
            "transported_cost": report.transported_cost,
            "unmatch_penalty": report.unmatch_penalty,
            "alpha_star": report.alpha_star,
            "feasible_pairs": report.feasible_pairs,
            "lap_value": report.lap_value,
            "transposed": report.transposed,
        }

        truth = inst.ground_truth
        if truth is not None and len(truth):
            quality = metrics.evaluate(report.assignment, truth, inst)
            payload.update(dataclasses.asdict(quality))
        elif truth is not None:
            logger.warning("Ground truth is empty, skipping quality metrics")

        if sinkhorn is not None:
            payload["alpha"] = inst.alpha.tolist()
            payload["beta"] = inst.beta.tolist()
            payload["sinkhorn"] = {
                "iterations": sinkhorn.iterations,
                "residual": sinkhorn.residual,
                "converged": sinkhorn.converged,
            }
        return payload

    @staticmethod
    def loss_to_dict(report: LossReport, rho: float, lam: float, fd_error: Optional[float]) -> dict:
        payload: dict[str, Any] = {
            "rho": rho,
            "lambda": lam,
            "l_cost": report.l_cost,
            "l_bias": report.l_bias,
            "l_total": report.l_total,
            "active_pairs": report.active_pairs,
        }
        if report.grad_cost is not None:
            payload["grad_cost"] = report.grad_cost.tolist()
            payload["grad_alpha"] = report.grad_alpha.tolist()
            payload["grad_beta"] = report.grad_beta.tolist()
        if fd_error is not None:
            payload["fd_max_error"] = fd_error
        return payload

    def save_json(self, payload: dict, path: str | Path) -> Path:
        """Save a report as canonical JSON."""
        file_path = write_canonical(payload, path)
        logger.info(f"JSON report saved to: {file_path}")
        return file_path

    def save_csv(self, rows: Iterable[Any], fieldnames: Sequence[str], path: str | Path) -> Path:
        """
        Save dataclass or dict rows as CSV (UTF-8, LF line endings).

        None is written as an empty cell.
        """
        file_path = Path(path)
        file_path.parent.mkdir(parents=True, exist_ok=True)

        count = 0
        with open(file_path, "w", encoding="utf-8", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=list(fieldnames), lineterminator="\n")
            writer.writeheader()
            for row in rows:
                record = dataclasses.asdict(row) if dataclasses.is_dataclass(row) else dict(row)
                writer.writerow({key: _cell(record.get(key)) for key in fieldnames})
                count += 1

        logger.info(f"CSV table ({count} rows) saved to: {file_path}")
        return file_path


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)
