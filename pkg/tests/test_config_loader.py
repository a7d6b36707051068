import os

import pytest

from config_loader import (
    DEFAULT_CONFIG,
    get_float,
    get_sinkhorn_config,
    get_worker_count,
    load_config,
    substitute_env_vars,
)


def test_defaults_without_file(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    config = load_config()
    assert config["solver"]["rho"] == 0.4
    assert get_sinkhorn_config(config).temperature == 0.1


def test_file_overrides_defaults(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("solver:\n  rho: 0.7\nsinkhorn:\n  tau: 0.5\n", encoding="utf-8")
    config = load_config(str(path))
    assert config["solver"]["rho"] == 0.7
    assert config["solver"]["transpose_policy"] == "auto"
    assert get_sinkhorn_config(config).temperature == 0.5
    assert get_sinkhorn_config(config).max_iters == 200


def test_explicit_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_config(str(tmp_path / "absent.yaml"))


def test_non_mapping_file(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("- 1\n- 2\n", encoding="utf-8")
    with pytest.raises(ValueError):
        load_config(str(path))


def test_env_substitution(monkeypatch):
    monkeypatch.setenv("PM_TEST_VALUE", "3")
    monkeypatch.delenv("PM_TEST_UNSET", raising=False)
    assert substitute_env_vars("${PM_TEST_VALUE}") == "3"
    assert substitute_env_vars({"a": ["${PM_TEST_UNSET:-7}"]}) == {"a": ["7"]}
    assert substitute_env_vars("${PM_TEST_UNSET}") == ""
    assert substitute_env_vars(1.5) == 1.5


def test_dotenv_next_to_config(tmp_path, monkeypatch):
    monkeypatch.delenv("POPA_THREADS", raising=False)
    (tmp_path / ".env").write_text("POPA_THREADS=3\n", encoding="utf-8")
    (tmp_path / "config.yaml").write_text("{}\n", encoding="utf-8")
    try:
        config = load_config(str(tmp_path / "config.yaml"))
        assert get_worker_count(config) == 3
    finally:
        os.environ.pop("POPA_THREADS", None)


@pytest.mark.parametrize(
    "threads, expected",
    [("2", 2), ("", os.cpu_count() or 1), ("0", os.cpu_count() or 1), ("lots", 1), ("-4", 1)],
)
def test_worker_count(threads, expected):
    assert get_worker_count({"runtime": {"threads": threads}}) == expected


def test_get_float_falls_back_on_garbage():
    assert get_float({"loss": {"lambda": "heavy"}}, "loss", "lambda") == DEFAULT_CONFIG["loss"]["lambda"]
    assert get_float({}, "bench", "max_ratio") == 10.0
