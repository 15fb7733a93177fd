"""How fast do the U_2l coefficients of |x|^(2k+1) decay?

For each l prints |c_l|, |c_l| l^(2k+2) (which levels off) and the
factorial quantity 1/(2l-2k)! for comparison.
"""

import argparse
import math

from klooster.chebyshev import abs_coefficient, abs_power_coeffs, claimed_tail_bound, coefficient_majorant


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=int, default=1)
    ap.add_argument("--lmax", type=int, default=40)
    args = ap.parse_args(argv)
    k = args.k

    print(f"{'l':>4} {'|c_l|':>12} {'|c_l| l^(2k+2)':>16} {'majorant':>12} {'1/(2l-2k)!':>12}")
    for l in range(1, args.lmax + 1):
        c = abs(abs_coefficient(k, l))
        fact = 1 / math.factorial(2 * l - 2 * k) if l >= k else float("nan")
        maj = coefficient_majorant(k, l) if l > k else float("nan")
        print(f"{l:>4} {c:12.4e} {c * l ** (2 * k + 2):16.6f} {maj:12.4e} {fact:12.4e}")
    exp = abs_power_coeffs(k)
    print(f"\nL = {exp.L}: certified sup tail {exp.tail_bound:.3e}, 3/(2L-2k)! = {claimed_tail_bound(k, exp.L):.3e}")


if __name__ == "__main__":
    main()
