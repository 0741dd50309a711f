"""Check the closed-form time-t Kraus operators against the Choi route.

For each Upsilon/Xi convention and a range of times, report whether the set
is trace preserving and matches the channel extracted from the Choi matrix.
"""

import argparse

from glocal.channel import analytic_kraus_t, channel_distance, choi_matrix, kraus_from_choi
from glocal.errors import KrausConventionError
from glocal.model import ModelParams

CONVENTIONS = [("sqrt", "corrected"), ("sqrt", "printed"), ("polynomial", "corrected"),
               ("polynomial", "printed")]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--times", type=float, nargs="+", default=[0.1, 0.5, 1, 2, 5, 30])
    args = ap.parse_args()
    p = ModelParams(1.0, 0.0, 0.0)
    for t in args.times:
        reference = kraus_from_choi(choi_matrix(p, t))
        for ups, xi in CONVENTIONS:
            label = f"t={t:<5g} upsilon={ups:<10} xi={xi:<9}"
            try:
                k = analytic_kraus_t(t, ups, xi)
            except KrausConventionError as exc:
                print(f"{label} rejected: {exc}")
                continue
            print(f"{label} ok: completeness {k.completeness_residual:.1e}, "
                  f"distance to Choi route {channel_distance(k, reference):.1e}")


if __name__ == "__main__":
    main()
