"""JSON encoding shared by every report: complex numbers are ``[re, im]`` pairs."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

SCHEMA_VERSION = "1"


def complex_to_json(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def complex_from_json(pair) -> complex:
    if isinstance(pair, (int, float)):
        return complex(pair)
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise ValueError(f"complex number must be [re, im], got {pair!r}")
    return complex(float(pair[0]), float(pair[1]))


def vector_to_json(v) -> list[list[float]]:
    return [complex_to_json(z) for z in np.asarray(v).ravel()]


def vector_from_json(data) -> np.ndarray:
    if not isinstance(data, list) or not data:
        raise ValueError("vector must be a non-empty array of [re, im] pairs")
    return np.array([complex_from_json(z) for z in data], dtype=complex)


def matrix_to_json(m) -> list[list[list[float]]]:
    return [vector_to_json(row) for row in np.asarray(m)]


def matrix_from_json(data) -> np.ndarray:
    if not isinstance(data, list) or not data:
        raise ValueError("matrix must be a non-empty array of rows")
    rows = [vector_from_json(r) for r in data]
    if len({r.size for r in rows}) != 1:
        raise ValueError("matrix rows have unequal lengths")
    return np.array(rows)


def to_plain(obj: Any) -> Any:
    """Recursively convert numpy scalars/arrays so ``json.dumps`` accepts them."""
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return matrix_to_json(obj) if obj.ndim == 2 else vector_to_json(obj)
        return to_plain(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, complex):
        return complex_to_json(obj)
    return obj


def dumps(report: dict) -> str:
    return json.dumps(to_plain(report), indent=2, sort_keys=True) + "\n"


def write_report(report: dict, path: str | Path | None) -> str:
    text = dumps(report)
    if path is None or str(path) == "-":
        print(text, end="")
    else:
        Path(path).write_text(text)
    return text


def load(path: str | Path) -> Any:
    with open(path) as fh:
        return json.load(fh)


def strip_metadata(report: dict) -> dict:
    """Copy of ``report`` without the volatile ``metadata`` block."""
    return {k: v for k, v in report.items() if k != "metadata"}
