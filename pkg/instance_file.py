"""Instance files: JSON schema, canonical formatting and conversion to Instance.

Two layouts are accepted. Cost mode carries the problem directly:

    {"m": 2, "n": 2, "cost": [[...], [...]], "alpha": [...], "beta": [...],
     "rho": 0.4, "ground_truth": [[1, 1], [2, 2]]}

Affinity mode carries a raw affinity matrix and lets the matching head
derive cost and biases:

    {"affinity": [[...]], "w_rs": 1.0, "rho": 0.4,
     "sinkhorn": {"tau": 0.1, "max_iters": 200, "tol": 1e-6}}

Indices in files are 1-based. Canonical files have sorted keys, two-space
indentation, one matrix row per line and floats printed with 17
significant digits, so write(read(file)) reproduces a canonical file byte
for byte.
"""

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

import numpy as np
from loguru import logger

import affinity
import core
from errors import ValidationError
from models import AffinityMatrix, Instance, PartialAssignment, SinkhornConfig, SinkhornResult

COST_KEYS = {"m", "n", "cost", "alpha", "beta", "rho", "ground_truth"}
AFFINITY_KEYS = {"m", "n", "affinity", "w_rs", "rho", "sinkhorn", "ground_truth"}
SINKHORN_KEYS = {"tau", "max_iters", "tol"}


@dataclass(frozen=True)
class InstanceFile:
    """Parsed content of an instance file, before any derivation."""

    m: int
    n: int
    cost: Optional[list] = None
    alpha: Optional[list] = None
    beta: Optional[list] = None
    affinity: Optional[list] = None
    w_rs: Optional[float] = None
    rho: Optional[float] = None
    sinkhorn: Optional[dict] = None
    ground_truth: Optional[list] = None

    @property
    def mode(self) -> str:
        return "affinity" if self.affinity is not None else "cost"

    @classmethod
    def from_instance(cls, inst: Instance) -> "InstanceFile":
        truth = inst.ground_truth.to_one_based() if inst.ground_truth is not None else None
        return cls(
            m=inst.m,
            n=inst.n,
            cost=inst.cost.tolist(),
            alpha=inst.alpha.tolist(),
            beta=inst.beta.tolist(),
            rho=inst.rho,
            ground_truth=truth,
        )

    def to_dict(self) -> dict:
        data: dict[str, Any] = {"m": self.m, "n": self.n}
        for key in ("cost", "alpha", "beta", "affinity", "w_rs", "rho", "sinkhorn", "ground_truth"):
            value = getattr(self, key)
            if value is not None:
                data[key] = value
        return data


def _number(value: Any, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{name} must be a number, got {value!r}")
    if not math.isfinite(value):
        raise ValidationError(f"non-finite entry in {name}")
    return float(value)


def _integer(value: Any, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"{name} must be an integer, got {value!r}")
    return value


def _vector(value: Any, name: str) -> list[float]:
    if not isinstance(value, list):
        raise ValidationError(f"{name} must be an array")
    return [_number(v, name) for v in value]


def _matrix(value: Any, name: str) -> list[list[float]]:
    if not isinstance(value, list) or not all(isinstance(row, list) for row in value):
        raise ValidationError(f"{name} must be an array of arrays")
    rows = [_vector(row, name) for row in value]
    if len({len(row) for row in rows}) > 1:
        raise ValidationError(f"{name} must be a rectangular matrix")
    return rows


def parse_instance_data(data: Any) -> InstanceFile:
    """Check the schema of a decoded instance file."""
    if not isinstance(data, dict):
        raise ValidationError("instance file must contain a JSON object")

    has_cost, has_affinity = "cost" in data, "affinity" in data
    if has_cost == has_affinity:
        raise ValidationError("instance file needs exactly one of 'cost' or 'affinity'")

    allowed = AFFINITY_KEYS if has_affinity else COST_KEYS
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ValidationError(f"unknown keys in instance file: {', '.join(unknown)}")

    rho = _number(data["rho"], "rho") if "rho" in data else None
    truth = None
    if "ground_truth" in data:
        if not isinstance(data["ground_truth"], list):
            raise ValidationError("ground_truth must be an array of [i, j] pairs")
        truth = []
        for pair in data["ground_truth"]:
            if not isinstance(pair, list) or len(pair) != 2:
                raise ValidationError(f"malformed ground truth pair: {pair!r}")
            truth.append([_integer(pair[0], "ground_truth"), _integer(pair[1], "ground_truth")])

    if has_affinity:
        values = _matrix(data["affinity"], "affinity")
        m = len(values)
        n = len(values[0]) if values else _integer(data.get("n", 0), "n")
        for key, size in (("m", m), ("n", n)):
            if key in data and _integer(data[key], key) != size:
                raise ValidationError(f"dimension mismatch: {key}={data[key]} but affinity gives {size}")
        if "w_rs" not in data:
            raise ValidationError("affinity mode needs 'w_rs'")
        sinkhorn = None
        if "sinkhorn" in data:
            raw = data["sinkhorn"]
            if not isinstance(raw, dict) or set(raw) - SINKHORN_KEYS:
                raise ValidationError(f"sinkhorn accepts only {sorted(SINKHORN_KEYS)}")
            sinkhorn = {
                key: (_integer(v, key) if key == "max_iters" else _number(v, key))
                for key, v in raw.items()
            }
        return InstanceFile(
            m=m,
            n=n,
            affinity=values,
            w_rs=_number(data["w_rs"], "w_rs"),
            rho=rho,
            sinkhorn=sinkhorn,
            ground_truth=truth,
        )

    for key in ("m", "n", "alpha", "beta"):
        if key not in data:
            raise ValidationError(f"cost mode needs '{key}'")
    return InstanceFile(
        m=_integer(data["m"], "m"),
        n=_integer(data["n"], "n"),
        cost=_matrix(data["cost"], "cost"),
        alpha=_vector(data["alpha"], "alpha"),
        beta=_vector(data["beta"], "beta"),
        rho=rho,
        ground_truth=truth,
    )


def read_instance_file(path: str | Path) -> InstanceFile:
    """Read and schema-check an instance file. OSError propagates unchanged."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(f"malformed JSON in {path}: {e}") from e
    parsed = parse_instance_data(data)
    logger.debug(f"Read {parsed.mode}-mode instance {parsed.m}x{parsed.n} from {path}")
    return parsed


def _shaped(rows: list, m: int, n: int) -> np.ndarray:
    """Matrix of shape (m, n); an empty JSON array carries no column count."""
    matrix = np.asarray(rows, dtype=np.float64)
    if matrix.size == 0 and m * n == 0:
        return matrix.reshape(m, n)
    return matrix


def to_instance(
    parsed: InstanceFile,
    default_rho: float,
    default_sinkhorn: SinkhornConfig = SinkhornConfig(),
    rho_override: Optional[float] = None,
) -> tuple[Instance, Optional[SinkhornResult]]:
    """
    Build the validated Instance described by a file.

    Returns:
        (instance, Sinkhorn diagnostics in affinity mode, else None)
    """
    rho = rho_override if rho_override is not None else parsed.rho
    rho = default_rho if rho is None else rho
    truth = None
    if parsed.ground_truth is not None:
        truth = PartialAssignment.from_one_based(parsed.m, parsed.n, parsed.ground_truth)

    if parsed.mode == "cost":
        instance = Instance(
            m=parsed.m,
            n=parsed.n,
            cost=_shaped(parsed.cost, parsed.m, parsed.n),
            alpha=parsed.alpha,
            beta=parsed.beta,
            rho=rho,
            ground_truth=truth,
        )
        return core.validate_instance(instance), None

    settings = parsed.sinkhorn or {}
    cfg = SinkhornConfig(
        temperature=settings.get("tau", default_sinkhorn.temperature),
        max_iters=settings.get("max_iters", default_sinkhorn.max_iters),
        tol=settings.get("tol", default_sinkhorn.tol),
    )
    return affinity.derive_instance(
        AffinityMatrix(_shaped(parsed.affinity, parsed.m, parsed.n)), parsed.w_rs, rho, cfg, ground_truth=truth
    )


def _format_scalar(value: Any) -> str:
    if value is None or isinstance(value, (bool, str)):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValidationError(f"cannot write non-finite number {value!r}")
        text = format(value, ".17g")
        if "." not in text and "e" not in text and "n" not in text:
            text += ".0"
        return text
    raise TypeError(f"unsupported value in canonical JSON: {type(value).__name__}")


def _format(value: Any, indent: int) -> str:
    pad = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [
            f"{pad}{json.dumps(str(key), ensure_ascii=False)}: {_format(value[key], indent + 1)}"
            for key in sorted(value)
        ]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        if any(isinstance(item, (list, tuple, dict)) for item in value):
            items = [f"{pad}{_format(item, indent + 1)}" for item in value]
            return "[\n" + ",\n".join(items) + "\n" + "  " * indent + "]"
        return "[" + ", ".join(_format_scalar(item) for item in value) + "]"
    return _format_scalar(value)


def dumps_canonical(data: Any) -> str:
    """Canonical JSON text with a trailing newline."""
    return _format(data, 0) + "\n"


def write_canonical(data: Any, path: str | Path) -> Path:
    """Write canonical JSON as UTF-8 with LF line endings."""
    file_path = Path(path)
    file_path.parent.mkdir(parents=True, exist_ok=True)
    with open(file_path, "w", encoding="utf-8", newline="\n") as f:
        f.write(dumps_canonical(data))
    return file_path


def write_instance_file(parsed: InstanceFile, path: str | Path) -> Path:
    file_path = write_canonical(parsed.to_dict(), path)
    logger.info(f"Instance file saved to: {file_path}")
    return file_path
