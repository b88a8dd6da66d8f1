"""Shared brute-force oracles, kept independent of the code paths they check."""

from __future__ import annotations

import numpy as np
import pytest

from lrspread.lattice import LatticeSpec


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260824)


def bfs_distance(spec: LatticeSpec, i: int, j: int) -> int:
    """Breadth-first search on the explicit nearest-neighbor graph."""
    from collections import deque

    if i == j:
        return 0
    n = spec.n_sites
    seen = {i}
    queue = deque([(i, 0)])
    while queue:
        site, d = queue.popleft()
        c = list(spec.site_coords(site))
        for axis in range(spec.dimension):
            for step in (-1, 1):
                cc = list(c)
                cc[axis] += step
                if not 0 <= cc[axis] < spec.extents[axis]:
                    continue
                nb = spec.site_index(cc)
                if nb == j:
                    return d + 1
                if nb not in seen:
                    seen.add(nb)
                    queue.append((nb, d + 1))
    raise AssertionError("graph is connected; unreachable")


def dense_ising_correlators(n, alpha, J, o, j, t):
    """Exact diagonal-basis evolution of H = -sum_{i<j} J d^-alpha sz_i sz_j
    from |+>^N; returns (<sx_o>, <sx_j>, connected xx)."""
    idx = np.arange(2**n)
    sz = [2.0 * ((idx >> s) & 1) - 1.0 for s in range(n)]
    energy = np.zeros(2**n)
    for a in range(1, n):
        for b in range(a):
            energy += -J * float(a - b) ** (-alpha) * sz[a] * sz[b]
    psi = np.exp(-1j * t * energy) * np.full(2**n, 2.0 ** (-n / 2.0))

    def sx(site):
        return float(np.real(np.vdot(psi, psi[idx ^ (1 << site)])))

    def sxsx(s1, s2):
        return float(np.real(np.vdot(psi, psi[idx ^ (1 << s1) ^ (1 << s2)])))

    mo, mj = sx(o), sx(j)
    return mo, mj, sxsx(o, j) - mo * mj


def dense_hamiltonian(h):
    """2^N x 2^N matrix assembled by applying H to every basis vector."""
    from lrspread import ed

    dim = 1 << h.n_sites
    mat = np.zeros((dim, dim), dtype=np.complex128)
    for k in range(dim):
        e = np.zeros(dim, dtype=np.complex128)
        e[k] = 1.0
        mat[:, k] = ed.apply(h, ed.StateVector(h.n_sites, e)).amplitudes
    return mat


def channel_state_vector_p(length, delta, alpha, t, state):
    """Direct simulation of the commuting channel Hamiltonian on {o} + B.

    Returns |tr(T_t rho pi_B) - tr(N_t rho pi_B)|.  Only the receiver
    amplitudes matter: flipping the sender turns on a phase 2 t w_j on each
    receiver site's occupied component.
    """
    spec = LatticeSpec.chain(length)
    o = spec.origin
    receivers = [j for j in range(length) if abs(j - o) >= delta]
    n = len(receivers)
    w = np.array([(1.0 + abs(j - o)) ** (-alpha) for j in receivers])
    idx = np.arange(1 << n)
    energy = np.zeros(1 << n)
    for k in range(n):
        energy += 2.0 * w[k] * ((idx >> k) & 1)
    if state == "product_plus":
        psi0 = np.full(1 << n, 2.0 ** (-n / 2.0), dtype=np.complex128)
    elif state == "ghz":
        psi0 = np.zeros(1 << n, dtype=np.complex128)
        psi0[0] = psi0[-1] = 2.0**-0.5
    else:
        raise ValueError(state)
    psi_t = np.exp(-1j * t * energy) * psi0
    p_signal = abs(np.vdot(psi0, psi_t)) ** 2  # measurement is |psi0><psi0|
    return abs(p_signal - 1.0)
