"""Analytic signal probabilities and causal-region envelopes.

A sender at the origin couples to the exterior shell B = {j : dist >= delta}
through a commuting Ising-type interaction with algebraically decaying
weights (1 + dist)^(-alpha).  The detection probability p_t is available in
closed form for a product |+> receiver state and for a GHZ receiver state,
and lower-bounds the classical capacity of the induced channel.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import mpmath
import numpy as np

from .errors import DomainError
from .lattice import LatticeSpec, ShellTable, shell_counts, shell_sum

__all__ = [
    "InitialState",
    "ChannelSetup",
    "BoundParams",
    "SignalCurve",
    "GHZ_PHASE_FACTOR",
    "product_signal",
    "product_signal_lower_bound",
    "ghz_signal",
    "ghz_coupling_sum",
    "ghz_front_exponent",
    "lr_bound_envelope",
    "causal_boundary",
    "first_crossing_time",
    "sample_curve",
]

# Phase-accumulation prefactor of the GHZ detection probability,
#   p_t = (1 - cos(GHZ_PHASE_FACTOR * t * f(delta))) / 2.
# Fixed by the small-system state-vector oracle in the test suite: flipping
# the sender rotates each receiver phase by 2 t w_j, so the factor is 2.
GHZ_PHASE_FACTOR = 2.0


class InitialState(str, Enum):
    PRODUCT_PLUS = "product_plus"
    GHZ = "ghz"


@dataclass(frozen=True)
class ChannelSetup:
    """Sender-at-origin channel with receiver region {j : dist(o, j) >= delta}."""

    lattice: LatticeSpec
    delta: int
    alpha: float
    initial_state: InitialState = InitialState.PRODUCT_PLUS

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError(f"alpha must be nonnegative, got {self.alpha}")
        if self.delta < 1:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if self.delta > self.shells.l_max:
            raise ValueError(
                f"receiver region empty: delta={self.delta} exceeds l_max={self.shells.l_max}"
            )
        object.__setattr__(self, "initial_state", InitialState(self.initial_state))

    @property
    def shells(self) -> ShellTable:
        return shell_counts(self.lattice)

    @property
    def receiver_size(self) -> int:
        return int(sum(self.shells.counts[self.delta :]))


@dataclass(frozen=True)
class BoundParams:
    """Constants of the long-range commutator bound; all user-supplied."""

    C: float
    v: float
    xi: float
    epsilon: float
    size_a: int = 1
    size_b: int = 1

    def __post_init__(self):
        for name in ("C", "v", "xi", "epsilon"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.epsilon >= 1:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.size_a < 1 or self.size_b < 1:
            raise ValueError("region sizes must be positive")

    @property
    def min_region(self) -> int:
        return min(self.size_a, self.size_b)


@dataclass(frozen=True)
class SignalCurve:
    times: np.ndarray
    p: np.ndarray
    setup: ChannelSetup
    kind: str  # "exact" or "lower_bound"


def product_signal(setup: ChannelSetup, t: float) -> float:
    """Detection probability from the |+> product receiver state.

    p_t = 1 - prod_{j in B} (1 + cos(2 t w_j)) / 2 with w_j = (1+dist)^(-alpha),
    evaluated per shell as an exponentiated log-sum so |B| ~ 1e5 cannot
    underflow the product.  Each factor is cos^2(t w_j), so the log is
    2 ln|cos(t w_j)|; a factor hitting zero makes p_t exactly 1.
    """
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    table = setup.shells
    counts = np.asarray(table.counts[setup.delta :], dtype=np.float64)
    l = np.arange(setup.delta, table.l_max + 1, dtype=np.float64)
    theta = t * (1.0 + l) ** (-setup.alpha)
    with np.errstate(divide="ignore"):
        log_factors = 2.0 * np.log(np.abs(np.cos(theta)))
    total = float(np.dot(counts, log_factors))
    if not np.isfinite(total):
        return 1.0
    return float(-np.expm1(total))


def product_signal_lower_bound(setup: ChannelSetup, t: float) -> float:
    """Shell-sum lower bound on product_signal, valid while 2t <= (1+delta)^alpha."""
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    window = (1.0 + setup.delta) ** setup.alpha
    if 2.0 * t > window:
        raise DomainError(
            f"lower bound requires 2t <= (1+delta)^alpha = {window:.6g}, got t = {t:.6g}"
        )
    s = shell_sum(setup.shells, setup.delta, 2.0 * setup.alpha)
    return float(-np.expm1(-(4.0 * t * t / 5.0) * s))


def ghz_coupling_sum(setup: ChannelSetup) -> float:
    """f(delta) = sum_{j in B} (1 + dist(o, j))^(-alpha), via shell counts."""
    return shell_sum(setup.shells, setup.delta, setup.alpha)


def ghz_signal(setup: ChannelSetup, t: float) -> float:
    """Detection probability from the GHZ receiver state."""
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    f = ghz_coupling_sum(setup)
    return float(0.5 * (1.0 - np.cos(GHZ_PHASE_FACTOR * t * f)))


def _shell_density_prefactor(dimension: int) -> float:
    # O_l grows like 2 D l^(D-1) on a hypercubic lattice surface; the
    # prefactor cancels in log-log slopes but keeps f on the right scale.
    return 2.0 * dimension


def ghz_asymptotic_coupling(dimension: int, alpha: float, delta: int) -> float:
    """Boundary-free model of f(delta) via the continued Hurwitz zeta.

    The shell form of f is a tail sum of (1+l)^(alpha - ...) weights whose
    large-lattice behavior is |zeta(alpha - D + 1, 1 + delta)| up to a
    constant; the analytic continuation extends this to alpha < D, where
    the literal tail sum is boundary-dominated on any finite lattice.
    """
    s = alpha - dimension + 1
    if s == 1.0:
        raise DomainError("alpha = D sits on the zeta pole; exponent undefined there")
    z = mpmath.zeta(s, 1 + delta)
    return _shell_density_prefactor(dimension) * abs(float(z))


def ghz_front_exponent(lattice: LatticeSpec, alpha: float, delta_range) -> float:
    """Log-log slope of f(delta) over ``delta_range``; tends to D - alpha."""
    deltas = np.asarray(sorted(set(int(d) for d in delta_range)), dtype=np.int64)
    if deltas.size < 3:
        raise ValueError(f"need at least 3 distinct deltas, got {deltas.size}")
    if deltas[0] < 1:
        raise ValueError("deltas must be >= 1 for a log-log fit")
    table = shell_counts(lattice)
    if table.l_max < 4 * deltas[-1]:
        raise ValueError(
            f"lattice too small: l_max = {table.l_max} < 4 * max delta = {4 * deltas[-1]}"
        )
    if alpha == lattice.dimension:
        raise DomainError("alpha = D is excluded (zeta pole; f grows logarithmically)")
    f = np.array(
        [ghz_asymptotic_coupling(lattice.dimension, alpha, int(d)) for d in deltas]
    )
    slope, _ = np.polyfit(np.log(deltas.astype(np.float64)), np.log(f), 1)
    return float(slope)


def lr_bound_envelope(
    params: BoundParams, alpha: float, dimension: int, delta: int, t: float
) -> float:
    """Long-range commutator-bound envelope C min(|A|,|B|) (e^{v|t|}-1) / (1+delta)^(alpha-D).

    The denominator exponent follows the text ("growing logarithmically for
    large distances"); the printed sign convention would shrink with distance.
    """
    if alpha <= dimension:
        raise DomainError(f"bound not proven for alpha <= D (alpha={alpha}, D={dimension})")
    return float(
        params.C
        * params.min_region
        * np.expm1(params.v * abs(t))
        / (1.0 + delta) ** (alpha - dimension)
    )


def causal_boundary(params: BoundParams, alpha: float, dimension: int, delta: int) -> float:
    """Time at which the bound envelope reaches epsilon: the causal-region edge."""
    if alpha <= dimension:
        raise DomainError(f"bound not proven for alpha <= D (alpha={alpha}, D={dimension})")
    x = params.epsilon * (1.0 + delta) ** (alpha - dimension) / params.min_region
    return float(np.log1p(x) / params.v)


def first_crossing_time(
    curve, epsilon: float, t_hi: float = 1.0, tol: float = 1e-9, max_doublings: int = 200
) -> float:
    """Bisect for the earliest t with curve(t) >= epsilon.

    ``curve`` must be monotone in t up to its first crossing.  ``t_hi`` is
    doubled until it brackets the crossing.
    """
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    if curve(0.0) >= epsilon:
        return 0.0
    hi = t_hi
    for _ in range(max_doublings):
        if curve(hi) >= epsilon:
            break
        hi *= 2.0
    else:
        raise DomainError(f"curve never reaches epsilon = {epsilon} (searched up to t = {hi})")
    lo = 0.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if curve(mid) >= epsilon:
            hi = mid
        else:
            lo = mid
    return hi


def sample_curve(setup: ChannelSetup, times, kind: str = "exact", workers: int = 1) -> SignalCurve:
    """Evaluate a signal curve on a time grid.

    Chunks are assembled in fixed order, so results are bit-identical for
    any worker count.
    """
    times = np.asarray(times, dtype=np.float64)
    if times.size and (np.any(np.diff(times) <= 0) or times[0] < 0):
        raise ValueError("times must be strictly increasing and nonnegative")
    if kind == "exact":
        if setup.initial_state is InitialState.GHZ:
            fn = ghz_signal
        else:
            fn = product_signal
    elif kind == "lower_bound":
        fn = product_signal_lower_bound
    else:
        raise ValueError(f"unknown curve kind {kind!r}")

    def eval_chunk(chunk):
        return np.array([fn(setup, float(t)) for t in chunk])

    if workers <= 1 or times.size < 2:
        p = eval_chunk(times)
    else:
        chunks = np.array_split(times, workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(eval_chunk, chunks))
        p = np.concatenate(parts)
    return SignalCurve(times=times, p=p, setup=setup, kind=kind)
