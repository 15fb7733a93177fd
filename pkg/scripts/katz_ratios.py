"""Worst |sum_a U_k(cos theta_p(a))| / ((k+1) sqrt(p) / 2) per k over a prime range."""

import argparse

from klooster.kloosterman import angles, kloosterman_table
from klooster.modarith import primes_between
from klooster.moments import katz_sums


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--pmin", type=int, default=5)
    ap.add_argument("--pmax", type=int, default=2000)
    ap.add_argument("--kmax", type=int, default=30)
    args = ap.parse_args(argv)

    worst = {k: (0.0, 0) for k in range(1, args.kmax + 1)}
    for p in primes_between(max(5, args.pmin), args.pmax):
        for row in katz_sums(angles(kloosterman_table(p)), args.kmax):
            r = abs(row.total) / row.bound
            if r > worst[row.k][0]:
                worst[row.k] = (r, p)
    print(f"{'k':>3} {'worst ratio':>12} {'at p':>7}")
    for k, (r, p) in worst.items():
        print(f"{k:>3} {r:12.4f} {p:>7}")


if __name__ == "__main__":
    main()
