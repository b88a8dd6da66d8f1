"""Command-line front end: experiment orchestration and dataset export.

Every run writes its artifacts plus a ``manifest.json`` echoing the fully
resolved configuration (defaults included), so runs are reproducible and
byte-identical when repeated.  Exit codes: 0 success, 2 configuration
errors, 3 domain errors, 4 convergence failures.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import analysis, channel, ising, quench
from .errors import ConvergenceError, DomainError
from .fields import read_field, write_curve, write_field
from .lattice import LatticeSpec

OUT_ENV = "LRSPREAD_OUT"


def _default_out() -> str:
    return os.environ.get(OUT_ENV, "runs")


def _parse_span(raw: str) -> tuple[int, int]:
    lo, _, hi = raw.partition(":")
    return int(lo), int(hi)


def _parse_floats(raw: str) -> list[float]:
    return [float(x) for x in raw.split(",") if x.strip()]


def _parse_ints(raw: str) -> list[int]:
    out = []
    for piece in raw.split(","):
        piece = piece.strip()
        if not piece:
            continue
        if ":" in piece:
            parts = [int(x) for x in piece.split(":")]
            lo, hi = parts[0], parts[1]
            step = parts[2] if len(parts) > 2 else 1
            out.extend(range(lo, hi + 1, step))
        else:
            out.append(int(piece))
    return out


def _resolve(args: argparse.Namespace, defaults: dict) -> dict:
    """defaults < --config file < explicit flags."""
    cfg = dict(defaults)
    provided = vars(args)
    config_path = provided.pop("config", None)
    if config_path:
        try:
            file_cfg = json.loads(Path(config_path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as err:
            raise ConfigError(f"cannot read config file {config_path}: {err}") from err
        unknown = set(file_cfg) - set(defaults)
        if unknown:
            raise ConfigError(f"unknown config fields {sorted(unknown)} in {config_path}")
        cfg.update(file_cfg)
    cfg.update(provided)
    return cfg


class ConfigError(ValueError):
    pass


def _write_manifest(outdir: Path, subcommand: str, cfg: dict) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    payload = {"subcommand": subcommand, "config": cfg}
    (outdir / "manifest.json").write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def _time_grid(t_max: float, dt: float) -> np.ndarray:
    n = int(round(t_max / dt))
    return np.arange(n + 1, dtype=np.float64) * dt


# ---------------------------------------------------------------- subcommands

ISING_DEFAULTS = dict(alpha=0.75, n=1001, J=1.0, tmax=2.0, dt=0.01, delta_max=200,
                      out=None, workers=0)


def cmd_ising(cfg: dict) -> int:
    outdir = Path(cfg["out"] or Path(_default_out()) / "ising")
    workers = cfg["workers"] or os.cpu_count() or 1
    model = ising.IsingModel(LatticeSpec.chain(cfg["n"]), alpha=cfg["alpha"], J=cfg["J"])
    field = ising.correlation_field(
        model, delta_max=cfg["delta_max"], t_grid=_time_grid(cfg["tmax"], cfg["dt"]),
        workers=workers,
    )
    _write_manifest(outdir, "ising", cfg)
    write_field(field, outdir / "ising_field.csv")
    print(
        f"ising: N={cfg['n']} alpha={cfg['alpha']} grid "
        f"{field.distances.size}x{field.times.size} max|C|={np.abs(field.values).max():.4g} "
        f"-> {outdir}"
    )
    return 0


CHANNEL_PRODUCT_DEFAULTS = dict(alpha=0.25, length=1001, delta=10, tmax=1.0, nt=200,
                                kind="exact", out=None, workers=0)


def cmd_channel_product(cfg: dict) -> int:
    outdir = Path(cfg["out"] or Path(_default_out()) / "channel_product")
    workers = cfg["workers"] or os.cpu_count() or 1
    setup = channel.ChannelSetup(
        LatticeSpec.chain(cfg["length"]), delta=cfg["delta"], alpha=cfg["alpha"],
        initial_state=channel.InitialState.PRODUCT_PLUS,
    )
    times = np.linspace(0.0, cfg["tmax"], cfg["nt"])
    curve = channel.sample_curve(setup, times, kind=cfg["kind"], workers=workers)
    _write_manifest(outdir, "channel-product", cfg)
    write_curve(curve.times, curve.p, outdir / "signal_curve.csv", metadata={
        "alpha": cfg["alpha"], "D": 1, "delta": cfg["delta"],
        "receiver_size": setup.receiver_size, "state": "product_plus",
        "kind": cfg["kind"],
    })
    print(
        f"channel-product: alpha={cfg['alpha']} delta={cfg['delta']} |B|={setup.receiver_size} "
        f"p(tmax)={curve.p[-1]:.6g} -> {outdir}"
    )
    return 0


CHANNEL_GHZ_DEFAULTS = dict(alpha=1.5, d=1, length=4001, fit="10:200", delta=10,
                            tmax=None, nt=200, out=None, workers=0)


def cmd_channel_ghz(cfg: dict) -> int:
    outdir = Path(cfg["out"] or Path(_default_out()) / "channel_ghz")
    workers = cfg["workers"] or os.cpu_count() or 1
    lattice = LatticeSpec.grid(*([cfg["length"]] * cfg["d"]))
    lo, hi = _parse_span(cfg["fit"])
    slope = channel.ghz_front_exponent(lattice, cfg["alpha"], range(lo, hi + 1))
    _write_manifest(outdir, "channel-ghz", cfg)
    setup = channel.ChannelSetup(lattice, delta=cfg["delta"], alpha=cfg["alpha"],
                                 initial_state=channel.InitialState.GHZ)
    f_delta = channel.ghz_coupling_sum(setup)
    report = {
        "alpha": cfg["alpha"], "D": cfg["d"], "fit_window": [lo, hi],
        "slope": slope, "expected_slope": cfg["d"] - cfg["alpha"],
        "coupling_sum_at_delta": f_delta, "delta": cfg["delta"],
    }
    (outdir / "ghz_report.json").write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    if cfg["tmax"] is not None:
        times = np.linspace(0.0, cfg["tmax"], cfg["nt"])
        curve = channel.sample_curve(setup, times, workers=workers)
        write_curve(curve.times, curve.p, outdir / "signal_curve.csv", metadata={
            "alpha": cfg["alpha"], "D": cfg["d"], "delta": cfg["delta"],
            "receiver_size": setup.receiver_size, "state": "ghz", "kind": "exact",
        })
    print(
        f"channel-ghz: alpha={cfg['alpha']} D={cfg['d']} slope={slope:.4f} "
        f"(expected {cfg['d'] - cfg['alpha']:.4f}) -> {outdir}"
    )
    return 0


XXZ_DEFAULTS = dict(alpha=3.0, n=14, jperp=2.0, jz=1.0, tmax=2.0, dt=0.0025,
                    delta_max=None, stride=20, observables="zz_connected,pm",
                    destagger=True, out=None, workers=0)


def cmd_xxz_ed(cfg: dict) -> int:
    outdir = Path(cfg["out"] or Path(_default_out()) / "xxz_ed")
    qcfg = quench.QuenchConfig(
        n_sites=cfg["n"], alpha=cfg["alpha"], j_perp=cfg["jperp"], j_z=cfg["jz"],
        t_max=cfg["tmax"], dt=cfg["dt"], delta_max=cfg["delta_max"],
        sample_stride=cfg["stride"],
        observables=tuple(s.strip() for s in cfg["observables"].split(",") if s.strip()),
    )
    fields = quench.run_quench(qcfg)
    _write_manifest(outdir, "xxz-ed", cfg)
    for obs, field in fields.items():
        write_field(field, outdir / f"xxz_{obs}.csv")
        if cfg["destagger"]:
            write_field(quench.destagger_field(field), outdir / f"xxz_{obs}_destaggered.csv")
    peak = max(np.abs(f.values).max() for f in fields.values())
    print(
        f"xxz-ed: N={cfg['n']} alpha={cfg['alpha']} tmax={cfg['tmax']} "
        f"max|C|={peak:.4g} -> {outdir}"
    )
    return 0


FRONT_DEFAULTS = dict(field=None, epsilon=0.01, window=None, out=None)


def cmd_front(cfg: dict) -> int:
    if not cfg["field"]:
        raise ConfigError("front requires --field pointing at a field CSV")
    outdir = Path(cfg["out"] or Path(_default_out()) / "front")
    field = read_field(cfg["field"])
    front = analysis.extract_front(field, cfg["epsilon"])
    window = _parse_span(cfg["window"]) if cfg["window"] else None
    q, prefactor, residual = analysis.fit_power_law(front, window)
    _write_manifest(outdir, "front", cfg)
    analysis.write_front(front, outdir / "front.csv")
    analysis.write_fit_report(front.fit, outdir / "fit_report.json")
    print(
        f"front: epsilon={cfg['epsilon']} q={q:.4f} prefactor={prefactor:.4g} "
        f"residual={residual:.3g} censored={front.n_censored} -> {outdir}"
    )
    return 0


SCALING_DEFAULTS = dict(alpha=0.25, taus="0.1,1", deltas="20:120:20",
                        sizes="1000,10000,100000", J=1.0, out=None)


def cmd_scaling(cfg: dict) -> int:
    outdir = Path(cfg["out"] or Path(_default_out()) / "scaling")
    series = analysis.scaling_study(
        _parse_ints(cfg["sizes"]), cfg["alpha"], _parse_floats(cfg["taus"]),
        _parse_ints(cfg["deltas"]), J=cfg["J"],
    )
    _write_manifest(outdir, "scaling", cfg)
    lines = ["tau,delta,n,value"]
    report = {"alpha": cfg["alpha"], "series": []}
    from .fields import fmt

    for s in series:
        for si, n in enumerate(s.sizes):
            for di, d in enumerate(s.deltas):
                lines.append(f"{fmt(s.tau)},{int(d)},{int(n)},{fmt(s.values[si, di])}")
        report["series"].append({
            "tau": s.tau,
            "extrapolated": {str(int(d)): float(v) for d, v in zip(s.deltas, s.extrapolated)},
            "spread": s.spread,
            "mean": s.mean,
            "relative_spread": s.spread / abs(s.mean) if s.mean else float("inf"),
        })
    (outdir / "scaling_series.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    (outdir / "scaling_report.json").write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    summary = " ".join(
        f"tau={s['tau']}: spread/mean={s['relative_spread']:.3g}" for s in report["series"]
    )
    print(f"scaling: alpha={cfg['alpha']} {summary} -> {outdir}")
    return 0


BOUND_DEFAULTS = dict(front=None, alpha=1.5, d=1, C=1.0, v=1.0, xi=1.0,
                      epsilon=0.01, size_a=1, size_b=1, out=None)


def cmd_bound_compare(cfg: dict) -> int:
    if not cfg["front"]:
        raise ConfigError("bound-compare requires --front pointing at a front CSV")
    outdir = Path(cfg["out"] or Path(_default_out()) / "bound_compare")
    front = analysis.read_front(cfg["front"], epsilon=cfg["epsilon"])
    params = channel.BoundParams(C=cfg["C"], v=cfg["v"], xi=cfg["xi"],
                                 epsilon=cfg["epsilon"],
                                 size_a=cfg["size_a"], size_b=cfg["size_b"])
    report = analysis.compare_with_bound(front, params, cfg["alpha"], cfg["d"])
    _write_manifest(outdir, "bound-compare", cfg)
    (outdir / "bound_report.json").write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    if report["empty"]:
        print(f"bound-compare: empty report (no comparable points) -> {outdir}")
    else:
        print(
            f"bound-compare: min_ratio={report['min_ratio']:.4g} "
            f"median_ratio={report['median_ratio']:.4g} -> {outdir}"
        )
    return 0


# ------------------------------------------------------------------- plumbing

_COMMANDS = {
    "ising": (cmd_ising, ISING_DEFAULTS),
    "channel-product": (cmd_channel_product, CHANNEL_PRODUCT_DEFAULTS),
    "channel-ghz": (cmd_channel_ghz, CHANNEL_GHZ_DEFAULTS),
    "xxz-ed": (cmd_xxz_ed, XXZ_DEFAULTS),
    "front": (cmd_front, FRONT_DEFAULTS),
    "scaling": (cmd_scaling, SCALING_DEFAULTS),
    "bound-compare": (cmd_bound_compare, BOUND_DEFAULTS),
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lrspread",
        description="Correlation spreading in long-range quantum spin lattices",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add(name, defaults, spec):
        p = sub.add_parser(name, argument_default=argparse.SUPPRESS)
        p.add_argument("--config", help="JSON config file; flags override its values")
        p.add_argument("--out", help="output directory")
        for flag, kwargs in spec:
            p.add_argument(flag, **kwargs)
        return p

    f = float
    add("ising", ISING_DEFAULTS, [
        ("--alpha", dict(type=f)), ("--n", dict(type=int)), ("--J", dict(type=f)),
        ("--tmax", dict(type=f)), ("--dt", dict(type=f)),
        ("--delta-max", dict(type=int, dest="delta_max")),
        ("--workers", dict(type=int)),
    ])
    add("channel-product", CHANNEL_PRODUCT_DEFAULTS, [
        ("--alpha", dict(type=f)), ("--length", dict(type=int)),
        ("--delta", dict(type=int)), ("--tmax", dict(type=f)),
        ("--nt", dict(type=int)),
        ("--kind", dict(choices=["exact", "lower_bound"])),
        ("--workers", dict(type=int)),
    ])
    add("channel-ghz", CHANNEL_GHZ_DEFAULTS, [
        ("--alpha", dict(type=f)), ("--d", dict(type=int)),
        ("--length", dict(type=int)), ("--fit", dict()),
        ("--delta", dict(type=int)), ("--tmax", dict(type=f)),
        ("--nt", dict(type=int)), ("--workers", dict(type=int)),
    ])
    add("xxz-ed", XXZ_DEFAULTS, [
        ("--alpha", dict(type=f)), ("--n", dict(type=int)),
        ("--jperp", dict(type=f)), ("--jz", dict(type=f)),
        ("--tmax", dict(type=f)), ("--dt", dict(type=f)),
        ("--delta-max", dict(type=int, dest="delta_max")),
        ("--stride", dict(type=int)), ("--observables", dict()),
        ("--no-destagger", dict(action="store_false", dest="destagger")),
    ])
    add("front", FRONT_DEFAULTS, [
        ("--field", dict()), ("--epsilon", dict(type=f)), ("--window", dict()),
    ])
    add("scaling", SCALING_DEFAULTS, [
        ("--alpha", dict(type=f)), ("--taus", dict()), ("--deltas", dict()),
        ("--sizes", dict()), ("--J", dict(type=f)),
    ])
    add("bound-compare", BOUND_DEFAULTS, [
        ("--front", dict()), ("--alpha", dict(type=f)), ("--d", dict(type=int)),
        ("--C", dict(type=f)), ("--v", dict(type=f)), ("--xi", dict(type=f)),
        ("--epsilon", dict(type=f)),
        ("--size-a", dict(type=int, dest="size_a")),
        ("--size-b", dict(type=int, dest="size_b")),
    ])
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    name = args.subcommand
    del args.subcommand
    runner, defaults = _COMMANDS[name]
    try:
        cfg = _resolve(args, defaults)
        return runner(cfg)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except DomainError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    except ConvergenceError as err:
        print(f"error: {err}", file=sys.stderr)
        return 4
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
