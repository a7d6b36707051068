"""Configuration loader with environment variable substitution."""

import copy
import os
import re
from pathlib import Path
from typing import Any, Optional

import yaml
from dotenv import load_dotenv
from loguru import logger

from models import SinkhornConfig

DEFAULT_CONFIG_PATH = "config.yaml"

DEFAULT_CONFIG: dict = {
    "solver": {"rho": 0.4, "transpose_policy": "auto"},
    "loss": {"lambda": 0.5, "epsilon": 1.0e-7, "fd_step": 1.0e-5},
    "sinkhorn": {"tau": 0.1, "max_iters": 200, "tol": 1.0e-6},
    "oracle": {
        "count": 500,
        "max_m": 4,
        "max_n": 5,
        "max_candidates": 10_000_000,
        "max_lap_size": 8,
        "balanced_max_nodes": 12,
    },
    "bench": {"repeats": 3, "max_ratio": 10.0},
    "runtime": {"threads": "${POPA_THREADS:-0}"},
    "logging": {"dir": ""},
}

_ENV_PATTERN = re.compile(r"\$\{([A-Za-z_][A-Za-z0-9_]*)(?::-([^}]*))?\}")


def substitute_env_vars(value: Any) -> Any:
    """
    Recursively substitute environment variables in config values.

    Supports ${VAR_NAME} and ${VAR_NAME:-default}; unset variables without a
    default become empty strings.
    """
    if isinstance(value, str):
        return _ENV_PATTERN.sub(lambda m: os.getenv(m.group(1)) or (m.group(2) or ""), value)

    elif isinstance(value, dict):
        return {k: substitute_env_vars(v) for k, v in value.items()}

    elif isinstance(value, list):
        return [substitute_env_vars(item) for item in value]

    return value


def _merge(base: dict, override: dict) -> dict:
    merged = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config(config_path: Optional[str] = None) -> dict:
    """
    Load configuration from YAML file on top of the built-in defaults.

    Args:
        config_path: Path to config file; None means ./config.yaml if present

    Returns:
        Configuration dict with env vars substituted
    """
    explicit = config_path is not None
    config_file = Path(config_path or DEFAULT_CONFIG_PATH)

    # Load .env file if exists
    env_file = config_file.parent / ".env"
    if env_file.exists():
        load_dotenv(env_file)

    overrides: dict = {}
    if config_file.exists():
        with open(config_file, "r", encoding="utf-8") as f:
            overrides = yaml.safe_load(f) or {}
        if not isinstance(overrides, dict):
            raise ValueError(f"Config file {config_file} must contain a mapping")
    elif explicit:
        raise FileNotFoundError(f"Config file not found: {config_path}")

    return substitute_env_vars(_merge(DEFAULT_CONFIG, overrides))


def get_float(config: dict, section: str, key: str) -> float:
    """Numeric config value, falling back to the built-in default when malformed."""
    value = config.get(section, {}).get(key, DEFAULT_CONFIG[section][key])
    try:
        return float(value)
    except (TypeError, ValueError):
        fallback = DEFAULT_CONFIG[section][key]
        logger.warning(f"Invalid {section}.{key}={value!r}, fallback to {fallback}")
        return float(fallback)


def get_int(config: dict, section: str, key: str) -> int:
    return int(get_float(config, section, key))


def get_sinkhorn_config(config: dict) -> SinkhornConfig:
    return SinkhornConfig(
        temperature=get_float(config, "sinkhorn", "tau"),
        max_iters=get_int(config, "sinkhorn", "max_iters"),
        tol=get_float(config, "sinkhorn", "tol"),
    )


def get_worker_count(config: dict) -> int:
    """
    Worker threads for batch commands.

    runtime.threads (POPA_THREADS by default) caps parallelism; 0 or empty
    means one worker per CPU.
    """
    value = config.get("runtime", {}).get("threads", 0)
    try:
        threads = int(value or 0)
    except (TypeError, ValueError):
        logger.warning(f"Invalid runtime.threads={value!r}, fallback to 1")
        return 1
    if threads < 0:
        logger.warning(f"runtime.threads={threads} is negative, fallback to 1")
        return 1
    return threads or (os.cpu_count() or 1)
