"""q-expansion of the weight 4, level 6 eta product (eta(z) eta(2z) eta(3z) eta(6z))^2.

Everything here is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .modarith import PrimeModulus, as_prime

_LEVELS = (1, 2, 3, 6)
_SAFE = 1 << 62


@dataclass(frozen=True)
class QSeries:
    """coeff[n] for n = 1..N, stored 0-based."""

    N: int
    coeff: tuple[int, ...] = field(repr=False, compare=False)

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.N:
            raise IndexError(f"coefficient {n} outside 1..{self.N}")
        return self.coeff[n - 1]

    def rows(self):
        return ((n, c) for n, c in enumerate(self.coeff, start=1))


def eta_product_qexp(N: int) -> QSeries:
    """q * prod_(n>=1) (1-q^n)^2 (1-q^2n)^2 (1-q^3n)^2 (1-q^6n)^2 up to q^N."""
    if N < 1:
        raise ValueError("N must be >= 1")
    # prod[i] is the coefficient of q^i in the product; only i < N is needed
    prod = np.zeros(N, dtype=np.int64)
    prod[0] = 1
    for d in _LEVELS:
        for step in range(d, N, d):
            for _ in range(2):
                # multiply by (1 - q^step); RHS is evaluated before assignment
                prod[step:] = prod[step:] - prod[:-step]
            if int(np.max(np.abs(prod))) >= _SAFE:
                raise OverflowError(f"coefficients exceed 2^62 while building N={N}")
    return QSeries(N, tuple(int(c) for c in prod))


def b_p(p: int | PrimeModulus, series: QSeries) -> int:
    """The p-th coefficient of the eta product, for primes 7 < p <= N."""
    n = as_prime(p).p
    if n <= 7:
        raise ValueError(f"b_p is only used for p > 7, got {n}")
    if n > series.N:
        raise ValueError(f"series has {series.N} terms, need {n}")
    return series[n]


def deligne_ok(series: QSeries, n: int) -> bool:
    return abs(series[n]) < 2 * n**1.5
