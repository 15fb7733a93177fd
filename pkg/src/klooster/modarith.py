"""Modular arithmetic over a prime modulus.

Small, exact helpers: primality, linear-time inverse tables, Legendre
symbols, primitive roots and the additive character table e(t/p).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

# Deterministic Miller-Rabin witnesses, exact for n < 3.4e14.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17)
_MR_LIMIT = 341_550_071_728_321


def is_odd_prime(n: int) -> bool:
    """True iff ``n`` is a prime >= 3."""
    if n < 3 or n % 2 == 0:
        return False
    for q in (3, 5, 7, 11, 13, 17):
        if n % q == 0:
            return n == q
    if n >= _MR_LIMIT:
        raise ValueError(f"{n} exceeds the deterministic primality range")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for w in _MR_WITNESSES:
        x = pow(w, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_between(lo: int, hi: int) -> list[int]:
    """Odd primes in ``[lo, hi]`` (sieve)."""
    if hi < 3:
        return []
    sieve = np.ones(hi + 1, dtype=bool)
    sieve[:2] = False
    sieve[4::2] = False
    for q in range(3, math.isqrt(hi) + 1, 2):
        if sieve[q]:
            sieve[q * q :: 2 * q] = False
    return [int(q) for q in np.flatnonzero(sieve) if q >= max(lo, 3)]


@dataclass(frozen=True)
class PrimeModulus:
    """An odd prime p >= 5."""

    p: int

    def __post_init__(self) -> None:
        p = self.p
        if isinstance(p, bool) or not isinstance(p, (int, np.integer)):
            raise TypeError(f"modulus must be an integer, got {type(p).__name__}")
        object.__setattr__(self, "p", int(p))
        if p < 5:
            raise ValueError(f"modulus must be >= 5, got {p}")
        if not is_odd_prime(int(p)):
            raise ValueError(f"{p} is not an odd prime")

    def __int__(self) -> int:
        return self.p

    def __index__(self) -> int:
        return self.p


def as_prime(p: int | PrimeModulus) -> PrimeModulus:
    return p if isinstance(p, PrimeModulus) else PrimeModulus(p)


@dataclass(frozen=True)
class InverseTable:
    """Multiplicative inverses of the units mod p.

    ``inv[i]`` holds the inverse of ``a = i + 1``; index by residue with
    ``table[a]``.
    """

    p: PrimeModulus
    inv: np.ndarray = field(repr=False, compare=False)

    def __getitem__(self, a: int) -> int:
        a %= self.p.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return int(self.inv[a - 1])

    def padded(self) -> np.ndarray:
        """Length-p array with slot 0 set to 0, indexable by residue."""
        out = np.zeros(self.p.p, dtype=np.int64)
        out[1:] = self.inv
        return out


@lru_cache(maxsize=64)
def inverse_table(p: int | PrimeModulus) -> InverseTable:
    # inv[i] = -(p // i) * inv[p % i]  (mod p)
    pm = as_prime(p)
    n = pm.p
    inv = [0, 1] + [0] * (n - 2)
    for i in range(2, n):
        inv[i] = (n - (n // i) * inv[n % i] % n) % n
    arr = np.array(inv[1:], dtype=np.int64)
    arr.setflags(write=False)
    return InverseTable(pm, arr)


def legendre(a: int, p: int | PrimeModulus) -> int:
    """Legendre symbol (a/p) for an odd prime p, including p = 3."""
    p = int(p)
    if p != 3:
        as_prime(p)
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def legendre_table(p: int | PrimeModulus) -> np.ndarray:
    """(a/p) for a = 0..p-1 as an int8 array."""
    n = int(p)
    out = -np.ones(n, dtype=np.int8)
    out[0] = 0
    out[(np.arange(1, n, dtype=np.int64) ** 2) % n] = 1
    return out


def _factor_primes(n: int) -> list[int]:
    out, q = [], 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


@lru_cache(maxsize=64)
def primitive_root(p: int | PrimeModulus) -> int:
    """Smallest generator of (Z/pZ)^*."""
    n = as_prime(p).p
    qs = _factor_primes(n - 1)
    for g in range(2, n):
        if all(pow(g, (n - 1) // q, n) != 1 for q in qs):
            return g
    raise AssertionError("unreachable: every prime has a primitive root")


_TWO_PI_LD = np.longdouble("6.283185307179586476925286766559005768")


def unit_root(t: int, p: int | PrimeModulus) -> complex:
    """e(t/p) = exp(2 pi i t / p)."""
    n = int(p)
    t %= n
    if t > n // 2:
        t -= n
    ang = _TWO_PI_LD * np.longdouble(t) / np.longdouble(n)
    return complex(float(np.cos(ang)), float(np.sin(ang)))


@lru_cache(maxsize=16)
def root_table(p: int | PrimeModulus) -> tuple[np.ndarray, np.ndarray]:
    """cos and sin of 2 pi t / p for t = 0..p-1.

    Evaluated in extended precision on the centred residue t in (-p/2, p/2),
    so every entry is within one ulp of the true value (the double rounding
    from 80-bit to binary64 can push a few entries just past half an ulp).
    """
    n = int(p)
    t = np.arange(n, dtype=np.int64)
    t = np.where(t > n // 2, t - n, t).astype(np.longdouble)
    ang = _TWO_PI_LD * t / np.longdouble(n)
    c = np.cos(ang).astype(np.float64)
    s = np.sin(ang).astype(np.float64)
    c.setflags(write=False)
    s.setflags(write=False)
    return c, s
