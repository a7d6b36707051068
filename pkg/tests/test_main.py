import csv
import json

import pytest

import main
from instance_file import dumps_canonical


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("runtime:\n  threads: 2\n", encoding="utf-8")
    return str(path)


@pytest.fixture
def cost_file(tmp_path):
    path = tmp_path / "instance.json"
    path.write_text(
        dumps_canonical(
            {
                "m": 2,
                "n": 3,
                "cost": [[0.1, 0.9, 0.5], [0.9, 0.2, 0.95]],
                "alpha": [1.0, 1.0],
                "beta": [1.0, 1.0, 1.0],
                "rho": 0.4,
                "ground_truth": [[1, 1], [2, 2]],
            }
        ),
        encoding="utf-8",
    )
    return path


def run(config_file, *argv):
    return main.main(["--config", config_file, *argv])


def read_csv(path):
    with open(path, encoding="utf-8", newline="") as f:
        return list(csv.DictReader(f))


def test_solve_cost_file(config_file, cost_file, tmp_path):
    out = tmp_path / "report.json"
    assert run(config_file, "solve", str(cost_file), "-o", str(out)) == 0

    report = json.loads(out.read_text(encoding="utf-8"))
    assert report["pairs"] == [[1, 1], [2, 2]]
    assert report["total_cost"] == pytest.approx(0.3 + 0.4 * 1)
    assert report["f1"] == 1.0
    assert report["partiality_error"] == 0.0
    # dummy row: ρ (n - m) α*
    assert report["lap_value"] == pytest.approx(report["total_cost"] + 0.4 * 1 * report["alpha_star"])


def test_solve_rho_override(config_file, cost_file, tmp_path):
    out = tmp_path / "report.json"
    assert run(config_file, "solve", str(cost_file), "--rho", "1e-9", "-o", str(out)) == 0
    report = json.loads(out.read_text(encoding="utf-8"))
    assert report["pairs"] == []
    assert report["f1"] == 0.0


def test_solve_rejects_bad_alpha(config_file, tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(
        json.dumps({"m": 2, "n": 2, "cost": [[0.1, 0.9], [0.9, 0.1]], "alpha": [1.0], "beta": [1.0, 1.0]}),
        encoding="utf-8",
    )
    assert run(config_file, "solve", str(path), "-o", str(tmp_path / "r.json")) == 1
    assert "dimension mismatch: alpha" in capsys.readouterr().err
    assert not (tmp_path / "r.json").exists()


def test_solve_missing_input_is_io_error(config_file, tmp_path, capsys):
    assert run(config_file, "solve", str(tmp_path / "absent.json")) == 2
    assert "io error" in capsys.readouterr().err


def test_solve_malformed_json(config_file, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{", encoding="utf-8")
    assert run(config_file, "solve", str(path)) == 1


def test_solve_transpose_policy(config_file, tmp_path):
    path = tmp_path / "tall.json"
    path.write_text(
        json.dumps({"m": 2, "n": 1, "cost": [[0.1], [0.2]], "alpha": [1.0, 1.0], "beta": [1.0], "rho": 0.4}),
        encoding="utf-8",
    )
    out = tmp_path / "tall.report.json"
    assert run(config_file, "solve", str(path), "--transpose-policy", "never", "-o", str(out)) == 1
    assert run(config_file, "solve", str(path), "--transpose-policy", "auto", "-o", str(out)) == 0
    report = json.loads(out.read_text(encoding="utf-8"))
    assert report["pairs"] == [[1, 1]]
    assert report["transposed"] is True


def test_solve_affinity_file(config_file, tmp_path):
    path = tmp_path / "affinity.json"
    path.write_text(
        json.dumps({"affinity": [[3.0, 0.0], [0.0, 3.0]], "w_rs": 1.0, "rho": 0.4, "sinkhorn": {"tau": 0.5}}),
        encoding="utf-8",
    )
    out = tmp_path / "affinity.report.json"
    assert run(config_file, "solve", str(path), "-o", str(out)) == 0
    report = json.loads(out.read_text(encoding="utf-8"))
    assert len(report["alpha"]) == 2 and len(report["beta"]) == 2
    assert report["sinkhorn"]["converged"] is True
    assert report["pairs"] == [[1, 1], [2, 2]]


def test_gen_then_solve(config_file, tmp_path):
    instance = tmp_path / "planted.json"
    assert run(config_file, "gen", "-o", str(instance), "--m", "5", "--n", "7", "--k", "3", "--rho", "0.3", "--seed", "8") == 0
    data = json.loads(instance.read_text(encoding="utf-8"))
    assert (data["m"], data["n"], len(data["ground_truth"])) == (5, 7, 3)

    out = tmp_path / "planted.report.json"
    assert run(config_file, "solve", str(instance), "-o", str(out)) == 0
    assert json.loads(out.read_text(encoding="utf-8"))["f1"] == 1.0


def test_gen_then_solve_without_sources(config_file, tmp_path):
    instance = tmp_path / "empty.json"
    assert run(config_file, "gen", "-o", str(instance), "--m", "0", "--n", "3", "--k", "0") == 0

    out = tmp_path / "empty.report.json"
    assert run(config_file, "solve", str(instance), "-o", str(out)) == 0
    report = json.loads(out.read_text(encoding="utf-8"))
    assert report["pairs"] == []
    assert report["total_cost"] == pytest.approx(0.4 * 3)


def test_gen_is_deterministic(config_file, tmp_path):
    args = ["--m", "4", "--n", "4", "--k", "2", "--noise-sigma", "0.1", "--seed", "3"]
    assert run(config_file, "gen", "-o", str(tmp_path / "a.json"), *args) == 0
    assert run(config_file, "gen", "-o", str(tmp_path / "b.json"), *args) == 0
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_gen_rejects_too_many_pairs(config_file, tmp_path):
    assert run(config_file, "gen", "-o", str(tmp_path / "x.json"), "--m", "2", "--n", "2", "--k", "3") == 1


def test_oracle_command(config_file, tmp_path):
    out = tmp_path / "oracle.csv"
    assert run(config_file, "oracle", "--count", "40", "--seed", "1", "-o", str(out)) == 0
    rows = read_csv(out)
    assert len(rows) == 40
    assert all(row["ok"] == "true" for row in rows)
    assert all(int(row["m"]) <= 4 and int(row["n"]) <= 5 for row in rows)


def test_sweep_rho(config_file, cost_file, tmp_path):
    out = tmp_path / "sweep.csv"
    assert run(config_file, "sweep", str(cost_file), "--mode", "rho", "--values", "0.01,0.4,1000", "-o", str(out)) == 0
    rows = read_csv(out)
    assert [int(row["matched_count"]) for row in rows] == [0, 2, 2]
    assert list(rows[0]) == ["rho", "matched_count", "total_cost", "unmatched_mass", "f1"]
    assert out.read_bytes().count(b"\r") == 0


def test_sweep_lambda(config_file, cost_file, tmp_path):
    out = tmp_path / "lambda.csv"
    assert run(config_file, "sweep", str(cost_file), "--mode", "lambda", "--values", "0,0.5,1", "-o", str(out)) == 0
    assert len(read_csv(out)) == 3


def test_sweep_rejects_unsorted_grid(config_file, cost_file, tmp_path):
    args = ["sweep", str(cost_file), "--mode", "rho", "--values", "0.5,0.1", "-o", str(tmp_path / "s.csv")]
    assert run(config_file, *args) == 1


def test_bench_small_sizes(config_file, tmp_path):
    out = tmp_path / "bench.csv"
    assert run(config_file, "bench", "--sizes", "10,20", "--repeats", "1", "--seed", "0", "-o", str(out)) == 0
    rows = read_csv(out)
    assert [row["n"] for row in rows] == ["10", "20"]
    assert list(rows[0]) == ["n", "mean_ms", "p95_ms", "head_ms", "ratio"]
    assert rows[0]["ratio"] == ""


def test_bench_empty_sizes(config_file, tmp_path):
    assert run(config_file, "bench", "--sizes", "", "-o", str(tmp_path / "b.csv")) == 1


def test_loss_command(config_file, cost_file, tmp_path):
    out = tmp_path / "loss.json"
    assert run(config_file, "loss", str(cost_file), "--lambda", "0.5", "-o", str(out)) == 0
    report = json.loads(out.read_text(encoding="utf-8"))
    assert report["l_total"] == pytest.approx(report["l_cost"] + 0.5 * report["l_bias"])
    assert report["fd_max_error"] < 1e-5

    assert run(config_file, "loss", str(cost_file), "--fixed-biases", "-o", str(out)) == 0
    assert json.loads(out.read_text(encoding="utf-8"))["lambda"] == 0.0


def test_loss_needs_ground_truth(config_file, tmp_path):
    path = tmp_path / "plain.json"
    path.write_text(
        json.dumps({"m": 1, "n": 1, "cost": [[0.5]], "alpha": [1.0], "beta": [1.0]}),
        encoding="utf-8",
    )
    assert run(config_file, "loss", str(path)) == 1


def test_missing_config_is_io_error(tmp_path, cost_file):
    assert main.main(["--config", str(tmp_path / "absent.yaml"), "solve", str(cost_file)]) == 2


def test_log_file_is_written(tmp_path, cost_file):
    config = tmp_path / "logging.yaml"
    log_dir = tmp_path / "logs"
    config.write_text(f"logging:\n  dir: {log_dir}\n", encoding="utf-8")
    assert main.main(["--config", str(config), "solve", str(cost_file), "-o", str(tmp_path / "r.json")]) == 0
    assert len(list(log_dir.glob("partial-matching-*.log"))) == 1
