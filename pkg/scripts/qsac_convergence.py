"""Mean absolute error of the QSAC distance estimate against the exact value, per shot count."""

import argparse

import numpy as np

from sacq.boolfn import BooleanFunction, sac_report
from sacq.estimators import ExperimentConfig, qsac_estimate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=5)
    ap.add_argument("--functions", type=int, default=10)
    ap.add_argument("--repeats", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--shots", type=int, nargs="+", default=[100, 1000, 10000, 100000])
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    funcs = [BooleanFunction.random(args.n, rng) for _ in range(args.functions)]
    print(f"{'m':>8}  {'mean |err|':>12}  {'max |err|':>10}")
    for m in args.shots:
        errs = []
        for f in funcs:
            eps = sac_report(f).epsilon_exact
            for r in range(args.repeats):
                rep = qsac_estimate(f, ExperimentConfig("QSAC", m=m, seed=args.seed + r))
                errs.append(abs(rep.aggregate - eps))
        print(f"{m:>8}  {np.mean(errs):>12.4f}  {np.max(errs):>10.4f}")


if __name__ == "__main__":
    main()
