"""Correlation fields on a (distance, time) grid, plus the CSV/JSON disk format.

All simulation output funnels through ``CorrelationField``; analysis and the
plotting front end only ever see the exported files.  Floats are written
with 17 significant digits so repeated runs are byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "CorrelationField",
    "write_field",
    "read_field",
    "write_curve",
    "read_curve",
    "fmt",
]


def fmt(x: float) -> str:
    """Reproducible decimal formatting (17 significant digits, '.' separator)."""
    return format(float(x), ".17g")


@dataclass
class CorrelationField:
    """Values C(delta, t) with ``values[i, k]`` at ``distances[i]``, ``times[k]``."""

    distances: np.ndarray
    times: np.ndarray
    values: np.ndarray
    observable: str
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.distances = np.asarray(self.distances, dtype=np.int64)
        self.times = np.asarray(self.times, dtype=np.float64)
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != (self.distances.size, self.times.size):
            raise ValueError(
                f"values shape {self.values.shape} does not match "
                f"({self.distances.size}, {self.times.size})"
            )
        if np.any(np.diff(self.distances) <= 0) or (
            self.times.size > 1 and np.any(np.diff(self.times) <= 0)
        ):
            raise ValueError("distances and times must be strictly increasing")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field values must be finite")

    def row(self, delta: int) -> np.ndarray:
        idx = np.nonzero(self.distances == delta)[0]
        if idx.size == 0:
            raise KeyError(f"distance {delta} not in field")
        return self.values[idx[0]]


def _sidecar(path: Path) -> Path:
    return path.with_suffix(".json")


def write_field(field_: CorrelationField, csv_path) -> Path:
    """Write ``delta,t,value`` rows plus a JSON metadata sidecar."""
    path = Path(csv_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = ["delta,t,value"]
    for i, d in enumerate(field_.distances):
        for k, t in enumerate(field_.times):
            lines.append(f"{int(d)},{fmt(t)},{fmt(field_.values[i, k])}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    meta = dict(field_.metadata)
    meta["observable"] = field_.observable
    meta["n_distances"] = int(field_.distances.size)
    meta["n_times"] = int(field_.times.size)
    _sidecar(path).write_text(
        json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return path


def read_field(csv_path) -> CorrelationField:
    path = Path(csv_path)
    rows = path.read_text(encoding="utf-8").strip().splitlines()
    if not rows or rows[0] != "delta,t,value":
        raise ValueError(f"{path}: expected 'delta,t,value' header")
    data = np.array(
        [[float(x) for x in r.split(",")] for r in rows[1:]], dtype=np.float64
    )
    if data.size == 0:
        raise ValueError(f"{path}: no data rows")
    distances = np.unique(data[:, 0]).astype(np.int64)
    times = np.unique(data[:, 1])
    values = np.full((distances.size, times.size), np.nan)
    di = np.searchsorted(distances, data[:, 0].astype(np.int64))
    ti = np.searchsorted(times, data[:, 1])
    values[di, ti] = data[:, 2]
    meta_path = _sidecar(path)
    meta = json.loads(meta_path.read_text(encoding="utf-8")) if meta_path.exists() else {}
    observable = meta.pop("observable", "unknown")
    meta.pop("n_distances", None)
    meta.pop("n_times", None)
    return CorrelationField(distances, times, values, observable, meta)


def write_curve(times, p, csv_path, metadata: dict | None = None) -> Path:
    """Write a ``t,p`` signal curve plus its JSON sidecar."""
    path = Path(csv_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = ["t,p"]
    for t, pt in zip(times, p):
        lines.append(f"{fmt(t)},{fmt(pt)}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    _sidecar(path).write_text(
        json.dumps(metadata or {}, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return path


def read_curve(csv_path):
    path = Path(csv_path)
    rows = path.read_text(encoding="utf-8").strip().splitlines()
    if not rows or rows[0] != "t,p":
        raise ValueError(f"{path}: expected 't,p' header")
    data = np.array([[float(x) for x in r.split(",")] for r in rows[1:]])
    meta_path = _sidecar(path)
    meta = json.loads(meta_path.read_text(encoding="utf-8")) if meta_path.exists() else {}
    return data[:, 0], data[:, 1], meta
