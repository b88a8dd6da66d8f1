"""Figure rendering driven by a JSON spec file.

Spec format (one figure per invocation, ``lrplots --spec fig.json``):

    {
      "kind": "field" | "scaling",
      "input": "path/to/artifact.csv",
      "output": "path/to/figure.png",
      "mode": "linear" | "loglog",          # field figures only
      "overlay": "path/to/front.csv",       # optional front curve
      "vmin": ..., "vmax": ...,             # optional color bounds
      "dpi": 200,
      "title": "..."
    }

Density maps use a dark-for-small colormap; log-log mode plots ln|C| over
(ln delta, ln t) and drops only rows/columns whose axis values are not
strictly positive.  Rendering never writes to its inputs.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import ArtifactError, read_field, read_front, read_scaling_series

__all__ = ["FigureSpec", "render_field", "render_scaling", "render", "main"]

CMAP = "magma"  # dark colors at the low end
DEFAULT_DPI = 200


@dataclass
class FigureSpec:
    kind: str
    input: str
    output: str
    mode: str = "linear"
    overlay: str | None = None
    vmin: float | None = None
    vmax: float | None = None
    dpi: int = DEFAULT_DPI
    title: str | None = None

    def __post_init__(self):
        if self.kind not in ("field", "scaling"):
            raise ValueError(f"unknown figure kind {self.kind!r}")
        if self.mode not in ("linear", "loglog"):
            raise ValueError(f"unknown axes mode {self.mode!r}")

    @classmethod
    def from_json(cls, path) -> "FigureSpec":
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown spec fields {sorted(unknown)}")
        missing = {"kind", "input", "output"} - set(raw)
        if missing:
            raise ValueError(f"spec is missing required fields {sorted(missing)}")
        return cls(**raw)


def render_field(spec: FigureSpec) -> Path:
    field = read_field(spec.input)
    deltas, times, values = field.distances, field.times, field.values

    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    if spec.mode == "loglog":
        keep_d = deltas >= 1
        keep_t = times > 0
        z = np.log(np.abs(values[np.ix_(keep_d, keep_t)]))
        mesh = ax.pcolormesh(
            np.log(deltas[keep_d]), np.log(times[keep_t]), z.T,
            cmap=CMAP, shading="nearest", vmin=spec.vmin, vmax=spec.vmax,
        )
        ax.set_xlabel(r"$\ln \delta$")
        ax.set_ylabel(r"$\ln t$")
        label = r"$\ln |C|$"
    else:
        mesh = ax.pcolormesh(
            deltas, times, values.T,
            cmap=CMAP, shading="nearest", vmin=spec.vmin, vmax=spec.vmax,
        )
        ax.set_xlabel(r"$\delta$")
        ax.set_ylabel(r"$t$")
        label = r"$C(\delta, t)$"
    fig.colorbar(mesh, ax=ax, label=label)

    if spec.overlay:
        front = read_front(spec.overlay)
        if spec.mode == "loglog":
            keep = (front.deltas >= 1) & (front.t_star > 0)
            ax.plot(np.log(front.deltas[keep]), np.log(front.t_star[keep]),
                    color="w", lw=1.2, label=r"front $t^*(\delta)$")
        else:
            ax.plot(front.deltas, front.t_star, color="w", lw=1.2,
                    label=r"front $t^*(\delta)$")
        ax.legend(loc="upper left", fontsize=8)

    if spec.title:
        ax.set_title(spec.title)
    return _save(fig, spec)


def render_scaling(spec: FigureSpec) -> Path:
    series = read_scaling_series(spec.input)
    n_taus = series.taus.size
    fig, axes = plt.subplots(1, n_taus, figsize=(4.0 * n_taus, 3.4), squeeze=False)
    inv_n = 1.0 / series.sizes
    for ax, tau in zip(axes[0], series.taus):
        for delta in series.deltas:
            ax.plot(inv_n, series.values[float(tau)][float(delta)],
                    marker="o", ms=3, label=rf"$\delta = {delta:g}$")
        ax.set_xlabel(r"$1/N$")
        ax.set_ylabel(r"$C$")
        ax.set_title(rf"$\tau = {tau:g}$")
        ax.legend(fontsize=7)
    if spec.title:
        fig.suptitle(spec.title)
    return _save(fig, spec)


def _save(fig, spec: FigureSpec) -> Path:
    out = Path(spec.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=spec.dpi, bbox_inches="tight")
    plt.close(fig)
    return out


def render(spec: FigureSpec) -> Path:
    if spec.kind == "field":
        return render_field(spec)
    return render_scaling(spec)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="lrplots", description="Render one figure from a JSON spec"
    )
    parser.add_argument("--spec", required=True, help="path to the figure spec JSON")
    args = parser.parse_args(argv)
    try:
        spec = FigureSpec.from_json(args.spec)
        out = render(spec)
    except ArtifactError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (OSError, ValueError, json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
