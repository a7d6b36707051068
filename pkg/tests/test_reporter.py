import json

import pytest

import pgm
from models import SweepRow
from reporter import Reporter


def test_solve_report_with_metrics(diagonal_instance, tmp_path):
    reporter = Reporter()
    payload = reporter.solve_to_dict(diagonal_instance, pgm.solve(diagonal_instance))
    assert payload["pairs"] == [[1, 1], [2, 2]]
    assert payload["total_cost"] == pytest.approx(0.2)

    path = reporter.save_json(payload, tmp_path / "out" / "report.json")
    assert json.loads(path.read_text(encoding="utf-8"))["matched_count"] == 2


def test_csv_cells(tmp_path):
    rows = [
        SweepRow(rho=0.1, matched_count=0, total_cost=2.0, unmatched_mass=4.0, f1=None),
        {"rho": 0.5, "matched_count": 2, "total_cost": 0.25, "unmatched_mass": 0.0, "f1": 1.0},
    ]
    fields = ["rho", "matched_count", "total_cost", "unmatched_mass", "f1"]
    path = Reporter().save_csv(rows, fields, tmp_path / "sweep.csv")

    assert path.read_text(encoding="utf-8").splitlines() == [
        "rho,matched_count,total_cost,unmatched_mass,f1",
        "0.1,0,2.0,4.0,",
        "0.5,2,0.25,0.0,1.0",
    ]
