"""Kloosterman sums modulo primes: tables, power moments, Chebyshev
envelopes, twisted sums and the checks that tie them together."""

from .kloosterman import KloostermanTable, angles, kloosterman_sum, kloosterman_table, weil_verify
from .modarith import PrimeModulus

__version__ = "0.1.0"
