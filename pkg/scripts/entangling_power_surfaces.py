"""Entangling power over (gamma, n_l) for three global occupations.

Writes one CSV per n_g and prints the size of the positive region and the
maximum for each, which should shrink and drop as n_g grows.
"""

import argparse
from pathlib import Path

import numpy as np

from glocal.scan import Axis, ScanSpec, run_scan, write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default="results")
    ap.add_argument("--points", type=int, default=101)
    ap.add_argument("--n-g", type=float, nargs="+", default=[0.0, 0.01, 0.1])
    args = ap.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    axes = (Axis("gamma", 0.0, 0.999, args.points), Axis("n_l", 0.0, 3.0, args.points))
    for ng in args.n_g:
        spec = ScanSpec(axes, {"gamma": 0.0, "n_g": ng, "n_l": 0.0})
        rows = run_scan(spec)
        path = out / f"epower_surface_ng{ng:g}.csv"
        with open(path, "w") as fh:
            write_csv(rows, {"scan": spec.to_dict()}, fh)
        e = np.array([r["E"] for r in rows])
        print(f"n_g={ng:<5g} positive cells {int((e > 0).sum()):5d}/{e.size}  max E {e.max():.4f}  -> {path}")


if __name__ == "__main__":
    main()
