"""Causal-front extraction, power-law fitting, and finite-size scaling."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .channel import BoundParams, causal_boundary
from .errors import EmptyFrontError
from .fields import CorrelationField, fmt
from .ising import IsingModel, connected_xx
from .lattice import LatticeSpec

__all__ = [
    "CausalFront",
    "ScalingSeries",
    "extract_front",
    "fit_power_law",
    "scaling_study",
    "compare_with_bound",
    "write_front",
    "read_front",
    "write_fit_report",
]

DEFAULT_MIN_DELTA = 3  # lattice-scale artifacts are excluded from fits


@dataclass
class CausalFront:
    """Threshold arrival times t*(delta), sorted by delta, with fit results."""

    epsilon: float
    deltas: np.ndarray
    t_star: np.ndarray
    n_censored: int = 0
    fit: dict | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.deltas = np.asarray(self.deltas, dtype=np.int64)
        self.t_star = np.asarray(self.t_star, dtype=np.float64)
        if self.deltas.shape != self.t_star.shape:
            raise ValueError("deltas and t_star must have matching shapes")
        if np.any(np.diff(self.deltas) <= 0):
            raise ValueError("deltas must be strictly increasing")
        if np.any(self.t_star < 0):
            raise ValueError("arrival times must be nonnegative")


def extract_front(field_: CorrelationField, epsilon: float) -> CausalFront:
    """Earliest time each |C(delta, .)| row reaches ``epsilon``.

    Crossings are linearly interpolated between the bracketing grid times;
    rows that never cross are omitted and counted in ``n_censored``.
    """
    absval = np.abs(field_.values)
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    deltas, t_star = [], []
    censored = 0
    times = field_.times
    for i, d in enumerate(field_.distances):
        row = absval[i]
        above = np.nonzero(row >= epsilon)[0]
        if above.size == 0:
            censored += 1
            continue
        k = int(above[0])
        if k == 0:
            t_cross = float(times[0])
        else:
            t0, t1 = times[k - 1], times[k]
            c0, c1 = row[k - 1], row[k]
            t_cross = float(t0 + (epsilon - c0) * (t1 - t0) / (c1 - c0))
        deltas.append(int(d))
        t_star.append(t_cross)
    if not deltas:
        raise EmptyFrontError(
            f"no row of the field reaches epsilon = {epsilon} "
            f"(max |C| = {absval.max():.3g}); try a smaller threshold"
        )
    meta = dict(field_.metadata)
    meta["observable"] = field_.observable
    return CausalFront(epsilon, np.array(deltas), np.array(t_star),
                       n_censored=censored, metadata=meta)


def fit_power_law(front: CausalFront, delta_window=None,
                  min_delta: int = DEFAULT_MIN_DELTA):
    """OLS of ln t* on ln delta: returns (exponent q, prefactor, RMS residual).

    The fit is stored back on the front.  Points with t* = 0 cannot enter a
    log fit and are dropped.
    """
    lo, hi = delta_window if delta_window is not None else (min_delta, int(front.deltas.max()))
    lo = max(lo, min_delta)
    mask = (front.deltas >= lo) & (front.deltas <= hi) & (front.t_star > 0)
    if np.count_nonzero(mask) < 3:
        raise ValueError(
            f"degenerate fit window [{lo}, {hi}]: {np.count_nonzero(mask)} usable points"
        )
    x = np.log(front.deltas[mask].astype(np.float64))
    y = np.log(front.t_star[mask])
    q, intercept = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((y - (q * x + intercept)) ** 2)))
    fit = {
        "q": float(q),
        "prefactor": float(np.exp(intercept)),
        "residual": residual,
        "epsilon": front.epsilon,
        "window": [int(lo), int(hi)],
        "n_points": int(np.count_nonzero(mask)),
    }
    front.fit = fit
    return fit["q"], fit["prefactor"], fit["residual"]


@dataclass
class ScalingSeries:
    """Correlator values at fixed rescaled time tau across system sizes,
    with per-distance linear extrapolation in 1/N to the bulk limit."""

    tau: float
    alpha: float
    sizes: np.ndarray
    deltas: np.ndarray
    values: np.ndarray  # (n_sizes, n_deltas)
    extrapolated: np.ndarray
    residuals: np.ndarray

    @property
    def spread(self) -> float:
        return float(self.extrapolated.max() - self.extrapolated.min())

    @property
    def mean(self) -> float:
        return float(self.extrapolated.mean())


def scaling_study(sizes, alpha: float, taus, deltas, J: float = 1.0,
                  correlator=None) -> list[ScalingSeries]:
    """Closed-form Ising correlators at t = tau * N^(alpha - 1/2), one series
    per tau, each linearly extrapolated in 1/N per distance.

    ``correlator(n, delta, t)`` may replace the Ising closed form (synthetic
    inputs in tests).
    """
    sizes = np.asarray(sorted(int(n) for n in sizes))
    deltas = np.asarray(sorted(int(d) for d in deltas))
    taus = [float(tau) for tau in taus]
    if sizes.size < 2:
        raise ValueError("need at least 2 system sizes to extrapolate")
    if not taus or deltas.size == 0:
        raise ValueError("tau and delta lists must be nonempty")

    values = {tau: np.zeros((sizes.size, deltas.size)) for tau in taus}
    for si, n in enumerate(sizes):
        if correlator is None:
            model = IsingModel(LatticeSpec.chain(int(n)), alpha=alpha, J=J)
            o = model.lattice.origin
            corr = lambda d, t: connected_xx(model, o, o + int(d), t)  # noqa: E731
        else:
            corr = lambda d, t, n=int(n): correlator(n, int(d), t)  # noqa: E731
        for tau in taus:
            t = tau * float(n) ** (alpha - 0.5)
            for di, d in enumerate(deltas):
                values[tau][si, di] = corr(int(d), t)

    series = []
    inv_n = 1.0 / sizes.astype(np.float64)
    for tau in taus:
        extrap = np.zeros(deltas.size)
        resid = np.zeros(deltas.size)
        for di in range(deltas.size):
            slope, intercept = np.polyfit(inv_n, values[tau][:, di], 1)
            extrap[di] = intercept
            resid[di] = float(
                np.sqrt(np.mean((values[tau][:, di] - (slope * inv_n + intercept)) ** 2))
            )
        series.append(
            ScalingSeries(tau, alpha, sizes, deltas, values[tau], extrap, resid)
        )
    return series


def compare_with_bound(front: CausalFront, params: BoundParams,
                       alpha: float, dimension: int) -> dict:
    """Ratios t*(delta) / causal-boundary time; ratios >= 1 mean actual
    propagation is slower than the bound permits."""
    ratios = []
    for d, t in zip(front.deltas, front.t_star):
        tb = causal_boundary(params, alpha, dimension, int(d))
        if tb > 0:
            ratios.append((int(d), t / tb))
    if not ratios:
        return {"empty": True, "n_points": 0}
    vals = np.array([r for _, r in ratios])
    return {
        "empty": False,
        "n_points": len(ratios),
        "min_ratio": float(vals.min()),
        "median_ratio": float(np.median(vals)),
        "ratios": {str(d): float(r) for d, r in ratios},
    }


def write_front(front: CausalFront, csv_path) -> Path:
    path = Path(csv_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = ["delta,t_star"]
    for d, t in zip(front.deltas, front.t_star):
        lines.append(f"{int(d)},{fmt(t)}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def read_front(csv_path, epsilon: float = 0.5) -> CausalFront:
    path = Path(csv_path)
    rows = path.read_text(encoding="utf-8").strip().splitlines()
    if not rows or rows[0] != "delta,t_star":
        raise ValueError(f"{path}: expected 'delta,t_star' header")
    data = np.array([[float(x) for x in r.split(",")] for r in rows[1:]])
    order = np.argsort(data[:, 0])
    return CausalFront(epsilon, data[order, 0].astype(np.int64), data[order, 1])


def write_fit_report(fit: dict, json_path) -> Path:
    path = Path(json_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(fit, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path
