import numpy as np
import pytest

from lrspread import ed, quench
from lrspread.errors import ConvergenceError
from lrspread.fields import CorrelationField
from lrspread.lattice import LatticeSpec


@pytest.fixture(scope="module")
def small_quench():
    cfg = quench.QuenchConfig(n_sites=8, alpha=3.0, t_max=0.5, sample_stride=40)
    return cfg, quench.run_quench(cfg)


class TestConfig:
    def test_odd_size_rejected(self):
        with pytest.raises(ValueError, match="even"):
            quench.QuenchConfig(n_sites=7, alpha=3.0)

    def test_engine_limit(self):
        with pytest.raises(ValueError, match="engine limit"):
            quench.QuenchConfig(n_sites=18, alpha=3.0)

    def test_unknown_observable(self):
        with pytest.raises(ValueError, match="unknown observables"):
            quench.QuenchConfig(n_sites=8, alpha=3.0, observables=("xx",))

    def test_resolved_defaults(self):
        cfg = quench.QuenchConfig(n_sites=10, alpha=3.0)
        assert cfg.resolved_origin == 4
        assert cfg.resolved_delta_max == 5
        cfg2 = quench.QuenchConfig(n_sites=10, alpha=3.0, delta_max=3)
        assert cfg2.resolved_delta_max == 3


class TestRunQuench:
    def test_output_shapes_and_time_grid(self, small_quench):
        cfg, fields = small_quench
        assert set(fields) == {"zz_connected", "pm"}
        f = fields["zz_connected"]
        assert f.distances[0] == 1 and f.distances[-1] == cfg.resolved_delta_max
        assert f.times[0] == 0.0
        assert f.times[-1] == pytest.approx(cfg.t_max)
        assert np.allclose(np.diff(f.times)[:-1], cfg.sample_stride * cfg.dt)

    def test_initial_connected_correlator_vanishes(self, small_quench):
        # the staggered product state has no connected correlations at t = 0
        _, fields = small_quench
        assert np.allclose(fields["zz_connected"].values[:, 0], 0.0, atol=1e-14)
        assert np.allclose(fields["pm"].values[:, 0], 0.0, atol=1e-14)

    def test_matches_direct_propagation(self, small_quench):
        # recompute one sample time by stepping the engine directly
        cfg, fields = small_quench
        lattice_n = cfg.n_sites
        h = ed.build_xxz(LatticeSpec.chain(lattice_n), cfg.j_perp, cfg.j_z, cfg.alpha)
        pcfg = ed.PropagatorConfig(dt=cfg.dt)
        psi = ed.staggered_state(lattice_n)
        for _ in range(cfg.sample_stride):
            psi = ed.krylov_step(h, psi, pcfg)
        o = cfg.resolved_origin
        zo = ed.expectation_z(psi, o)
        expected = ed.expectation_zz(psi, o, o + 2) - zo * ed.expectation_z(psi, o + 2)
        got = fields["zz_connected"].row(2)[1]
        assert got == pytest.approx(expected, abs=1e-12)

    def test_metadata(self, small_quench):
        cfg, fields = small_quench
        meta = fields["zz_connected"].metadata
        assert meta["model"] == "long_range_xxz"
        assert meta["N"] == cfg.n_sites
        assert meta["destaggered"] is False
        assert fields["pm"].metadata["abs_value"] is True

    def test_convergence_error_carries_time(self):
        cfg = quench.QuenchConfig(
            n_sites=8, alpha=0.5, t_max=0.02, dt=0.01,
            krylov_dim=2, krylov_cap=2, krylov_tol=1e-15,
        )
        with pytest.raises(ConvergenceError, match="t = "):
            quench.run_quench(cfg)


class TestDestagger:
    def test_running_max_bound_basic(self):
        row = np.array([0.1, 0.5, 0.2, 0.4, 0.05])
        out = quench.running_max_bound(row)
        assert np.array_equal(out, [0.5, 0.5, 0.4, 0.4, 0.05])
        assert np.all(np.diff(out) <= 0)

    def test_running_max_bound_idempotent(self):
        row = np.array([0.3, 0.8, 0.1, 0.6])
        once = quench.running_max_bound(row)
        assert np.array_equal(quench.running_max_bound(once), once)

    def test_destagger_column(self, small_quench):
        _, fields = small_quench
        f = quench.destagger_field(fields["zz_connected"])
        col = quench.destagger(f, t_index=f.times.size - 1)
        assert np.array_equal(col, f.values[:, -1])

    def test_destaggered_field_is_monotone_and_flagged(self, small_quench):
        _, fields = small_quench
        f = quench.destagger_field(fields["zz_connected"])
        assert f.metadata["destaggered"] is True
        assert f.metadata["abs_value"] is True
        assert np.all(np.diff(f.values, axis=0) <= 1e-15)
        assert np.all(f.values >= 0)

    def test_destaggered_dominates_absolute_values(self, small_quench):
        _, fields = small_quench
        raw = fields["zz_connected"]
        f = quench.destagger_field(raw)
        assert np.all(f.values >= np.abs(raw.values) - 1e-15)

    def test_signed_mode(self):
        field = CorrelationField(
            [1, 2, 3], [0.0], np.array([[-0.5], [0.3], [-0.1]]), "zz_connected", {}
        )
        signed = quench.destagger_field(field, absolute=False)
        assert np.array_equal(signed.values[:, 0], [0.3, 0.3, -0.1])
        absed = quench.destagger_field(field)
        assert np.array_equal(absed.values[:, 0], [0.5, 0.3, 0.1])
