"""CSV and JSON interchange used by the command line.

Matrices are row-major CSV without a header; vectors are one value per
line; groups are a JSON array of arrays of 0-based indices. Floats are
written with shortest round-trip formatting.
"""

from __future__ import annotations

import json

import numpy as np

from .solver import GroupPartition

__all__ = [
    "load_matrix_csv",
    "load_vector_csv",
    "save_vector_csv",
    "save_matrix_csv",
    "load_groups_json",
]


def load_matrix_csv(path) -> np.ndarray:
    try:
        return np.loadtxt(path, delimiter=",", ndmin=2, dtype=float)
    except ValueError as exc:
        raise ValueError(f"cannot parse matrix CSV {path}: {exc}") from exc


def load_vector_csv(path) -> np.ndarray:
    try:
        data = np.loadtxt(path, delimiter=",", ndmin=1, dtype=float)
    except ValueError as exc:
        raise ValueError(f"cannot parse vector CSV {path}: {exc}") from exc
    if data.ndim != 1:
        raise ValueError(f"{path} holds a matrix, expected one value per line")
    return data


def save_vector_csv(x, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for v in np.asarray(x, dtype=float):
            fh.write(f"{float(v)!r}\n")


def save_matrix_csv(A, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in np.asarray(A, dtype=float):
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def load_groups_json(path, size: int) -> GroupPartition:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, list) or not all(isinstance(g, list) for g in data):
        raise ValueError(f"{path} must hold a JSON array of index arrays")
    return GroupPartition(groups=tuple(np.asarray(g, dtype=np.int64) for g in data), size=size)
