"""Empirical coverage of QSAC Hoeffding intervals over a grid of (t, delta)."""

import argparse

from sacq.boolfn import BooleanFunction
from sacq.estimators import qsac_coverage
from sacq.qsim import rng_stream


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--reps", type=int, default=500)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    f = BooleanFunction.random(args.n, rng_stream(args.seed))
    print(f"function {f!r}")
    print(f"{'t':>6} {'delta':>6} {'m':>6} {'min coord':>10} {'all coords':>11}  target")
    for t in (0.2, 0.1, 0.05):
        for delta in (0.2, 0.1, 0.05):
            cov = qsac_coverage(f, t, delta, args.reps, args.seed)
            print(f"{t:>6} {delta:>6} {cov.m:>6} {min(cov.per_coordinate):>10.3f} "
                  f"{cov.all_coordinates:>11.3f}  >= {1 - delta:.2f}")


if __name__ == "__main__":
    main()
