"""CSV tables and the JSON model file.

CSV is read and written with ``.`` decimals, ``,`` separators and ``\\n``
line endings regardless of locale.  Floats are written with 17 significant
digits so every value survives a round trip exactly.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .depth import DepthNotion
from .model import AcaModel
from .optimize import OptimizerConfig

FORMAT_VERSION = 1
MODEL_KEYS = ("format_version", "ambient_dim", "depth_notion", "components",
              "min_depths", "anchor_rows", "config", "seed")


class DataError(ValueError):
    """Input file content is malformed."""


@dataclass
class Table:
    values: np.ndarray
    names: list[str]


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _is_number(s: str) -> bool:
    try:
        return math.isfinite(float(s))
    except ValueError:
        return False


def read_csv(path: str | Path) -> Table:
    """Numeric table with an optional header row (detected when the first
    row is not entirely numeric)."""
    text = Path(path).read_text(encoding="utf-8")
    rows = [(i, r) for i, r in enumerate(csv.reader(io.StringIO(text)), start=1)
            if r and any(c.strip() for c in r)]
    names: list[str] | None = None
    if rows and not all(_is_number(c) for c in rows[0][1]):
        names = [c.strip() for c in rows[0][1]]
        rows = rows[1:]
    width = len(names) if names is not None else (len(rows[0][1]) if rows else 0)
    values = np.empty((len(rows), width))
    for k, (line, row) in enumerate(rows):
        if len(row) != width:
            raise DataError(f"line {line}: expected {width} fields, found {len(row)}")
        for c, cell in enumerate(row):
            try:
                v = float(cell)
            except ValueError:
                raise DataError(f"line {line}: field {c + 1} is not a number: {cell!r}") from None
            if not math.isfinite(v):
                raise DataError(f"line {line}: field {c + 1} is not finite")
            values[k, c] = v
    if names is None:
        names = [f"X{j + 1}" for j in range(width)]
    return Table(values, names)


def write_csv(path: str | Path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(x if isinstance(x, str) else fmt(x) for x in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _json(obj, indent: int = 0) -> str:
    # json.dumps cannot fix the float format, so the small schema is written by hand
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if all(not isinstance(x, (list, tuple, dict, np.ndarray)) for x in seq):
            return "[" + ", ".join(_json(x) for x in seq) + "]"
        return "[\n" + ",\n".join(pad + _json(x, indent + 1) for x in seq) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    return _json(obj) + "\n"


def model_to_dict(model: AcaModel) -> dict:
    cfg = model.config.to_dict()
    seed = cfg.pop("seed")
    return {
        "format_version": FORMAT_VERSION,
        "ambient_dim": model.ambient_dim,
        "depth_notion": model.notion.value,
        "components": [list(col) for col in model.components.T],
        "min_depths": list(model.min_depths),
        "anchor_rows": [int(j) for j in model.anchor_rows],
        "config": cfg,
        "seed": seed,
    }


def model_from_dict(doc: dict) -> AcaModel:
    if not isinstance(doc, dict):
        raise DataError("model file must contain a JSON object")
    missing = [k for k in MODEL_KEYS if k not in doc]
    if missing:
        raise DataError(f"model file is missing key(s): {', '.join(missing)}")
    unknown = sorted(set(doc) - set(MODEL_KEYS))
    if unknown:
        raise DataError(f"model file has unknown key(s): {', '.join(unknown)}")
    if doc["format_version"] != FORMAT_VERSION:
        raise DataError(f"unsupported format_version {doc['format_version']!r}")
    d = int(doc["ambient_dim"])
    A = np.asarray(doc["components"], dtype=float)
    if A.ndim != 2 or A.shape[1] != d or A.shape[0] < 1:
        raise DataError(f"components must be a non-empty list of length-{d} arrays")
    A = A.T
    p = A.shape[1]
    if np.max(np.abs(np.linalg.norm(A, axis=0) - 1.0)) > 1e-8:
        raise DataError("components are not unit vectors")
    if np.max(np.abs(A.T @ A - np.eye(p))) > 1e-8:
        raise DataError("components are not mutually orthogonal")
    depths = np.asarray(doc["min_depths"], dtype=float)
    anchors = np.asarray(doc["anchor_rows"], dtype=np.int64)
    if depths.shape != (p,) or anchors.shape != (p,):
        raise DataError("min_depths and anchor_rows need one entry per component")
    try:
        notion = DepthNotion.parse(doc["depth_notion"])
        config = OptimizerConfig.from_dict({**doc["config"], "seed": int(doc["seed"])})
    except (ValueError, TypeError) as exc:
        raise DataError(str(exc)) from None
    return AcaModel(d, A, depths, anchors, notion, config)


def save_model(model: AcaModel, path: str | Path) -> None:
    Path(path).write_text(dumps(model_to_dict(model)), encoding="utf-8", newline="\n")


def load_model(path: str | Path) -> AcaModel:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid JSON ({exc})") from None
    return model_from_dict(doc)
