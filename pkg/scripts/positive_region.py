"""Where the stationary map entangles, and the local noise that does it best.

Scans the (gamma, n_l) plane at n_g = 0, reports the smallest gamma with a
positive entangling power next to the small-noise prediction 1/sqrt(2), and
writes the optimal-noise curve.
"""

import argparse
from pathlib import Path

import numpy as np

from glocal.entanglement import positive_region_threshold
from glocal.scan import optimal_curve, write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default="results")
    ap.add_argument("--n-g", type=float, default=0.0)
    ap.add_argument("--points", type=int, default=201)
    args = ap.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    gammas = np.linspace(0, 0.999, args.points)
    g_star = positive_region_threshold(args.n_g, gammas, np.linspace(0, 3, args.points))
    print(f"threshold gamma* = {g_star:.4f} (grid step {gammas[1]:.4f}; 1/sqrt(2) = {2 ** -0.5:.4f})")

    curve_gammas = np.round(np.arange(0.70, 0.999, 0.01), 10)
    rows = optimal_curve(args.n_g, curve_gammas)
    path = out / f"optimal_local_noise_ng{args.n_g:g}.csv"
    with open(path, "w") as fh:
        write_csv(rows, {"n_g": args.n_g, "gammas": curve_gammas.tolist()}, fh)
    for r in rows[::5]:
        print(f"gamma {r['gamma']:.2f}  n_l* {r['n_l_star']:.4f}  E* {r['E_star']:.4f}")
    print(f"-> {path}")


if __name__ == "__main__":
    main()
