"""Readers for the simulation CSV artifacts.

Parsing is strict: any malformed row raises ``ArtifactError`` carrying the
file name and 1-based row number, which the CLI turns into a nonzero exit.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = ["ArtifactError", "Field", "Front", "ScalingSeries",
           "read_field", "read_front", "read_scaling_series"]


class ArtifactError(Exception):
    def __init__(self, path, row: int | None, message: str):
        self.path = str(path)
        self.row = row
        where = f"{self.path}" if row is None else f"{self.path}, row {row}"
        super().__init__(f"{where}: {message}")


@dataclass
class Field:
    distances: np.ndarray
    times: np.ndarray
    values: np.ndarray  # (n_distances, n_times)


@dataclass
class Front:
    deltas: np.ndarray
    t_star: np.ndarray


@dataclass
class ScalingSeries:
    """Long-format (tau, delta, n, value) records grouped by tau."""

    taus: np.ndarray
    deltas: np.ndarray
    sizes: np.ndarray
    # values[tau][delta] is a (len(sizes),) array ordered like sizes
    values: dict


def _rows(path, expected_header: str):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as err:
        raise ArtifactError(path, None, f"cannot read file ({err})") from err
    lines = text.strip().splitlines()
    if not lines or lines[0] != expected_header:
        raise ArtifactError(path, 1, f"expected header {expected_header!r}")
    n_cols = expected_header.count(",") + 1
    parsed = []
    for i, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != n_cols:
            raise ArtifactError(path, i, f"expected {n_cols} columns, got {len(parts)}")
        try:
            parsed.append([float(x) for x in parts])
        except ValueError as err:
            raise ArtifactError(path, i, f"non-numeric value ({err})") from err
    if not parsed:
        raise ArtifactError(path, None, "no data rows")
    return np.array(parsed)


def read_field(path) -> Field:
    data = _rows(path, "delta,t,value")
    distances = np.unique(data[:, 0])
    times = np.unique(data[:, 1])
    values = np.full((distances.size, times.size), np.nan)
    di = np.searchsorted(distances, data[:, 0])
    ti = np.searchsorted(times, data[:, 1])
    values[di, ti] = data[:, 2]
    if np.any(np.isnan(values)):
        raise ArtifactError(path, None, "incomplete (delta, t) grid")
    return Field(distances, times, values)


def read_front(path) -> Front:
    data = _rows(path, "delta,t_star")
    order = np.argsort(data[:, 0])
    return Front(data[order, 0], data[order, 1])


def read_scaling_series(path) -> ScalingSeries:
    data = _rows(path, "tau,delta,n,value")
    taus = np.unique(data[:, 0])
    deltas = np.unique(data[:, 1])
    sizes = np.unique(data[:, 2])
    values = {}
    for tau in taus:
        per_delta = {}
        sel_tau = data[data[:, 0] == tau]
        for delta in deltas:
            sel = sel_tau[sel_tau[:, 1] == delta]
            ordered = sel[np.argsort(sel[:, 2])]
            if ordered.shape[0] != sizes.size:
                raise ArtifactError(
                    path, None,
                    f"tau {tau:g}, delta {delta:g}: {ordered.shape[0]} sizes, "
                    f"expected {sizes.size}",
                )
            per_delta[float(delta)] = ordered[:, 3]
        values[float(tau)] = per_delta
    return ScalingSeries(taus, deltas, sizes, values)
