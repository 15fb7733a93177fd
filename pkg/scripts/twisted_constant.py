"""Residual of the second-moment identity for twisted sums with constant p
and with constant p - 1, over random characters and arguments."""

import argparse
import random

from klooster.modarith import primes_between
from klooster.twisted import character, twisted_identity_check


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--pmax", type=int, default=200)
    ap.add_argument("--samples", type=int, default=5)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)
    rng = random.Random(args.seed)

    worst_p = worst_pm1 = 0.0
    best_pm1 = float("inf")
    for p in primes_between(5, args.pmax):
        for _ in range(args.samples):
            chk = twisted_identity_check(character(p, rng.randrange(p - 1)), rng.randrange(1, p), rng.randrange(1, p))
            worst_p = max(worst_p, chk.residual)
            worst_pm1 = max(worst_pm1, chk.residual_printed)
            best_pm1 = min(best_pm1, chk.residual_printed)
    print(f"constant p:     worst residual {worst_p:.3e}")
    print(f"constant p - 1: residual in [{best_pm1:.12f}, {worst_pm1:.12f}]")


if __name__ == "__main__":
    main()
