"""Hypercubic lattice geometry, graph distances, and shell counts.

Everything downstream (signal probabilities, Ising correlators, front
extraction) is expressed in terms of the graph distance from an origin
site and the number of sites O_l at each distance l, so this module is
deliberately small and fully vectorized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

__all__ = [
    "LatticeSpec",
    "ShellTable",
    "graph_distance",
    "shell_counts",
    "shell_sum",
]


@dataclass(frozen=True)
class LatticeSpec:
    """Open-boundary hypercubic lattice with row-major site indexing.

    ``origin`` defaults to the most central site, ties broken toward the
    lower index (coordinate (e - 1) // 2 on each axis).
    """

    extents: tuple[int, ...]
    origin: int = field(default=-1)

    def __post_init__(self):
        if not self.extents or any(e < 1 for e in self.extents):
            raise ValueError(f"extents must be positive, got {self.extents}")
        object.__setattr__(self, "extents", tuple(int(e) for e in self.extents))
        if self.origin < 0:
            center = tuple((e - 1) // 2 for e in self.extents)
            object.__setattr__(self, "origin", self.site_index(center))
        if not 0 <= self.origin < self.n_sites:
            raise ValueError(f"origin {self.origin} outside lattice of {self.n_sites} sites")

    @property
    def dimension(self) -> int:
        return len(self.extents)

    @property
    def n_sites(self) -> int:
        return math.prod(self.extents)

    @classmethod
    def chain(cls, length: int, origin: int = -1) -> "LatticeSpec":
        return cls((length,), origin)

    @classmethod
    def grid(cls, *extents: int) -> "LatticeSpec":
        return cls(tuple(extents))

    def site_coords(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.n_sites:
            raise ValueError(f"site index {index} outside lattice of {self.n_sites} sites")
        coords = []
        for e in reversed(self.extents):
            coords.append(index % e)
            index //= e
        return tuple(reversed(coords))

    def site_index(self, coords) -> int:
        if len(coords) != self.dimension:
            raise ValueError(f"expected {self.dimension} coordinates, got {len(coords)}")
        index = 0
        for c, e in zip(coords, self.extents):
            if not 0 <= c < e:
                raise ValueError(f"coordinate {c} outside axis of extent {e}")
            index = index * e + c
        return index

    def distances_from(self, origin: int | None = None) -> np.ndarray:
        """Graph distance from ``origin`` to every site, as a flat array."""
        o = self.origin if origin is None else origin
        oc = self.site_coords(o)
        dist = np.zeros((), dtype=np.int64)
        for axis, (e, c) in enumerate(zip(self.extents, oc)):
            d_ax = np.abs(np.arange(e, dtype=np.int64) - c)
            shape = [1] * self.dimension
            shape[axis] = e
            dist = dist + d_ax.reshape(shape)
        return np.broadcast_to(dist, self.extents).reshape(-1)


@dataclass(frozen=True)
class ShellTable:
    """Number of sites at each graph distance from a fixed origin.

    ``counts[l]`` is O_l = |{j : dist(origin, j) = l}| for l = 0..l_max;
    the counts sum to the lattice size.
    """

    origin: int
    counts: tuple[int, ...]

    def __post_init__(self):
        if not self.counts or self.counts[0] != 1:
            raise ValueError("shell table must start with the origin shell (count 1)")

    @property
    def l_max(self) -> int:
        return len(self.counts) - 1

    @property
    def n_sites(self) -> int:
        return int(sum(self.counts))


def graph_distance(spec: LatticeSpec, i: int, j: int) -> int:
    """Shortest edge-path length between sites i and j (Manhattan distance)."""
    ci, cj = spec.site_coords(i), spec.site_coords(j)
    return int(sum(abs(a - b) for a, b in zip(ci, cj)))


@lru_cache(maxsize=32)
def shell_counts(spec: LatticeSpec, origin: int | None = None) -> ShellTable:
    """Exhaustive shell counts O_l around ``origin`` (defaults to spec.origin)."""
    o = spec.origin if origin is None else origin
    dist = spec.distances_from(o)
    counts = np.bincount(dist)
    return ShellTable(origin=o, counts=tuple(int(c) for c in counts))


def shell_sum(table: ShellTable, delta: int, exponent: float) -> float:
    """Compensated evaluation of sum_{l >= delta} (1 + l)^(-exponent) O_l.

    Returns 0.0 for an empty tail (delta beyond the last shell).
    """
    if delta < 0:
        raise ValueError(f"delta must be nonnegative, got {delta}")
    if exponent < 0:
        raise ValueError(f"exponent must be nonnegative, got {exponent}")
    if delta > table.l_max:
        return 0.0
    counts = np.asarray(table.counts[delta:], dtype=np.float64)
    l = np.arange(delta, table.l_max + 1, dtype=np.float64)
    terms = counts * (1.0 + l) ** (-exponent)
    return math.fsum(terms)
