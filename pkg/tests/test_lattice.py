import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lrspread.lattice import LatticeSpec, ShellTable, graph_distance, shell_counts, shell_sum

from conftest import bfs_distance


class TestLatticeSpec:
    def test_central_origin_default(self):
        assert LatticeSpec.chain(21).origin == 10
        assert LatticeSpec.chain(20).origin == 9  # tie broken toward lower index
        assert LatticeSpec.grid(5, 5).site_coords(LatticeSpec.grid(5, 5).origin) == (2, 2)

    def test_rejects_bad_extents_and_origin(self):
        with pytest.raises(ValueError):
            LatticeSpec((0,))
        with pytest.raises(ValueError):
            LatticeSpec.chain(5, origin=5)

    def test_coord_roundtrip(self):
        spec = LatticeSpec.grid(3, 4, 5)
        for idx in range(spec.n_sites):
            assert spec.site_index(spec.site_coords(idx)) == idx


class TestGraphDistance:
    def test_identity(self):
        assert graph_distance(LatticeSpec.chain(11), 5, 5) == 0

    def test_manhattan_2d(self):
        spec = LatticeSpec.grid(5, 6)
        i = spec.site_index((0, 0))
        j = spec.site_index((3, 4))
        assert graph_distance(spec, i, j) == 7

    def test_invalid_site(self):
        with pytest.raises(ValueError):
            graph_distance(LatticeSpec.chain(5), 0, 7)

    def test_against_bfs_3d(self, rng):
        spec = LatticeSpec.grid(3, 4, 3)
        for _ in range(25):
            i, j = rng.integers(0, spec.n_sites, size=2)
            assert graph_distance(spec, int(i), int(j)) == bfs_distance(spec, int(i), int(j))

    def test_metric_axioms_sampled(self, rng):
        spec = LatticeSpec.grid(4, 5)
        sites = rng.integers(0, spec.n_sites, size=(30, 3))
        for i, j, k in sites:
            i, j, k = int(i), int(j), int(k)
            dij = graph_distance(spec, i, j)
            assert dij == graph_distance(spec, j, i)
            assert dij <= graph_distance(spec, i, k) + graph_distance(spec, k, j)


class TestShellCounts:
    def test_centered_chain(self):
        table = shell_counts(LatticeSpec.chain(21))
        assert table.counts[0] == 1
        assert all(c == 2 for c in table.counts[1:])
        assert table.n_sites == 21

    def test_2d_counts(self):
        table = shell_counts(LatticeSpec.grid(21, 21))
        assert table.counts[1] == 4
        assert table.counts[2] == 8

    def test_counts_sum_to_lattice_size(self):
        for spec in [LatticeSpec.chain(14), LatticeSpec.grid(7, 9), LatticeSpec.grid(4, 4, 4)]:
            assert shell_counts(spec).n_sites == spec.n_sites

    def test_surface_growth_bound(self):
        # centered lattices: O_l <= 2 D l^(D-1), the hypercube-surface scaling
        for extents, c in [((201,), 2), ((41, 41), 4)]:
            spec = LatticeSpec(extents)
            table = shell_counts(spec)
            d = spec.dimension
            for l, count in enumerate(table.counts[1:], start=1):
                assert count <= c * l ** (d - 1)

    def test_origin_shell_required(self):
        with pytest.raises(ValueError):
            ShellTable(origin=0, counts=(2, 2))


class TestShellSum:
    def test_zero_exponent_zero_delta_is_n(self):
        table = shell_counts(LatticeSpec.chain(1001))
        assert shell_sum(table, 0, 0.0) == 1001.0

    def test_empty_tail(self):
        table = shell_counts(LatticeSpec.chain(21))
        assert shell_sum(table, table.l_max + 1, 1.0) == 0.0

    def test_against_direct_site_summation(self):
        spec = LatticeSpec.chain(201)
        table = shell_counts(spec)
        alpha = 0.75
        for delta in [0, 1, 5, 40]:
            direct = math.fsum(
                (1.0 + d) ** (-2 * alpha)
                for d in spec.distances_from()
                if d >= delta
            )
            assert shell_sum(table, delta, 2 * alpha) == pytest.approx(direct, rel=1e-14)

    def test_invalid_args(self):
        table = shell_counts(LatticeSpec.chain(11))
        with pytest.raises(ValueError):
            shell_sum(table, -1, 1.0)
        with pytest.raises(ValueError):
            shell_sum(table, 0, -0.5)

    @settings(max_examples=50, deadline=None)
    @given(
        delta=st.integers(min_value=0, max_value=60),
        e1=st.floats(min_value=0, max_value=4),
        e2=st.floats(min_value=0, max_value=4),
    )
    def test_monotone_in_delta_and_exponent(self, delta, e1, e2):
        table = shell_counts(LatticeSpec.chain(101))
        assert shell_sum(table, delta, e1) >= shell_sum(table, delta + 1, e1)
        lo, hi = sorted([e1, e2])
        assert shell_sum(table, delta, lo) >= shell_sum(table, delta, hi)

    def test_convergence_dichotomy_in_chain_length(self):
        # alpha > 1/2: tail sums Cauchy in L; alpha < 1/2: they diverge
        lengths = [10**3 + 1, 10**4 + 1, 10**5 + 1]
        convergent = [
            shell_sum(shell_counts(LatticeSpec.chain(L)), 1, 2 * 0.75) for L in lengths
        ]
        diffs = np.diff(convergent)
        assert np.all(diffs > 0)
        assert diffs[1] < diffs[0]
        assert diffs[1] < 1e-1
        divergent = [
            shell_sum(shell_counts(LatticeSpec.chain(L)), 1, 2 * 0.25) for L in lengths
        ]
        assert divergent[2] > 2 * divergent[1] > 4 * divergent[0] / 2
        assert divergent[2] > 100
