"""Exhaustively compare epsilon with the true distance to the nearest SAC function."""

import argparse
from collections import Counter

from sacq.boolfn import all_functions, check_distance_bound, sac_functions, sac_report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=3, choices=(1, 2, 3))
    args = ap.parse_args()

    res = check_distance_bound(args.n)
    print(f"n={res.n}: {res.functions_checked} functions, {res.sac_count} satisfy SAC")
    print("bound holds" if res.holds else f"counterexamples: {res.counterexamples}")

    sac = [int(f.to_bits(), 2) for f in sac_functions(args.n)]
    gaps = Counter()
    for f in all_functions(args.n):
        code = int(f.to_bits(), 2)
        dist = min((code ^ s).bit_count() for s in sac)
        gaps[(sac_report(f).epsilon_exact, dist)] += 1
    print(f"{'epsilon':>8} {'distance':>9} {'count':>6}")
    for (eps, dist), c in sorted(gaps.items()):
        print(f"{eps:>8} {dist:>9} {c:>6}")


if __name__ == "__main__":
    main()
