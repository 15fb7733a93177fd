"""Sign-split statistics against the candidate leading constants.

Prints pos_sum / p^1.5, pos_count / p, the Cauchy-Schwarz floor
pos_sum^2 / (V_2 p) and Vabs_1 / p^1.5 for primes in a range.  The floor
tends to 16/(9 pi^2) while pos_count / p itself tends to 1/2.
"""

import argparse
import csv
import math
import sys
from dataclasses import dataclass

from klooster.kloosterman import kloosterman_table
from klooster.modarith import primes_between
from klooster.moments import DERIVED_POS_COUNT, DERIVED_POS_SUM, PRINTED_POS_COUNT, PRINTED_POS_SUM, sign_statistics


@dataclass
class Config:
    pmin: int = 1000
    pmax: int = 20000
    stride: int = 50


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--pmin", type=int, default=Config.pmin)
    ap.add_argument("--pmax", type=int, default=Config.pmax)
    ap.add_argument("--stride", type=int, default=Config.stride, help="keep every n-th prime")
    cfg = Config(**vars(ap.parse_args(argv)))

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["p", "pos_sum_ratio", "pos_count_ratio", "cs_floor", "vabs1_ratio"])
    for p in primes_between(cfg.pmin, cfg.pmax)[:: cfg.stride]:
        rep = sign_statistics(kloosterman_table(p))
        w.writerow([p, f"{rep.pos_sum_ratio:.6f}", f"{rep.pos_count_ratio:.6f}",
                    f"{rep.stats.pos_sum**2 / (rep.V2 * p):.6f}", f"{rep.Vabs1 / p**1.5:.6f}"])
    print(f"# pos_sum: 4/(3pi) = {DERIVED_POS_SUM:.6f}, 1/(3pi) = {PRINTED_POS_SUM:.6f}", file=sys.stderr)
    print(f"# cs_floor: 16/(9pi^2) = {DERIVED_POS_COUNT:.6f}, 4/(9pi^2) = {PRINTED_POS_COUNT:.6f}", file=sys.stderr)
    print(f"# Vabs_1: 8/(3pi) = {8 / (3 * math.pi):.6f}, 4/(3pi) = {DERIVED_POS_SUM:.6f}", file=sys.stderr)


if __name__ == "__main__":
    main()
