#!/usr/bin/env python3
"""Full-size causal-front sweep for the exact Ising chain.

For each alpha, computes the N = 1001 connected xx field, extracts the
epsilon = 1e-3 front, fits the power law over delta in [20, 200], and writes
field, front, and fit artifacts under runs/front_sweep/alpha_<value>/.
"""

import argparse
import sys
from pathlib import Path

from lrspread.cli import main as cli_main

ALPHAS = [0.25, 0.75, 1.5]


def run(outroot: Path, workers: int) -> int:
    for alpha in ALPHAS:
        outdir = outroot / f"alpha_{alpha:g}"
        rc = cli_main([
            "ising", "--alpha", str(alpha), "--n", "1001",
            "--tmax", "5.0", "--dt", "0.02", "--delta-max", "220",
            "--workers", str(workers), "--out", str(outdir),
        ])
        if rc:
            return rc
        front_args = [
            "front", "--field", str(outdir / "ising_field.csv"),
            "--epsilon", "1e-3", "--out", str(outdir / "front"),
        ]
        if alpha < 1.0:
            front_args += ["--window", "20:200"]
        rc = cli_main(front_args)
        if rc:
            return rc
    return 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="runs/front_sweep")
    ap.add_argument("--workers", type=int, default=4)
    args = ap.parse_args()
    sys.exit(run(Path(args.out), args.workers))
