"""Kloosterman sums S(a, b; p) over a prime modulus.

Only the b = 1 slice is tabulated; every other sum follows from
S(a, b; p) = S(ab, 1; p).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numba
import numpy as np

from .modarith import PrimeModulus, as_prime, inverse_table, root_table
from .transform import bluestein_dft, fft_size

EPS = np.finfo(np.float64).eps

# the direct path is the default below this size
DIRECT_LIMIT = 20_000

REAL_TOL = 1e-9
VANISH_TOL = 1e-9


class VanishingSumError(ArithmeticError):
    """A Kloosterman sum came out numerically zero."""


@dataclass(frozen=True)
class KloostermanTable:
    """S(a, 1; p) for a = 1..p-1.

    ``values[a - 1]`` is S(a, 1; p).  ``value_error`` bounds the absolute
    rounding error of each entry.
    """

    p: PrimeModulus
    values: np.ndarray = field(repr=False, compare=False)
    method: str = "direct"
    value_error: float = 0.0
    max_imag: float = 0.0

    def __post_init__(self) -> None:
        v = np.ascontiguousarray(self.values, dtype=np.float64)
        if v.shape != (self.p.p - 1,):
            raise ValueError(f"expected {self.p.p - 1} values, got {v.shape}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __getitem__(self, a: int) -> float:
        a %= self.p.p
        if a == 0:
            raise ValueError("S(0, 1; p) is not stored")
        return float(self.values[a - 1])

    def __len__(self) -> int:
        return self.values.shape[0]

    @property
    def sqrt_p(self) -> float:
        return math.sqrt(self.p.p)

    def normalized(self) -> np.ndarray:
        """S(a,1;p) / (2 sqrt p), i.e. cos of the Kloosterman angle."""
        return self.values / (2.0 * self.sqrt_p)


@dataclass(frozen=True)
class AngleTable:
    p: PrimeModulus
    theta: np.ndarray = field(repr=False, compare=False)

    def cos(self) -> np.ndarray:
        return np.cos(self.theta)


def kloosterman_sum(a: int, b: int, p: int | PrimeModulus) -> float:
    """S(a, b; p) by direct summation over the units."""
    pm = as_prime(p)
    n = pm.p
    if a % n == 0 or b % n == 0:
        raise ValueError(f"S(a,b;p) needs p not dividing ab (a={a}, b={b}, p={n})")
    inv = inverse_table(pm).inv
    x = np.arange(1, n, dtype=np.int64)
    idx = ((a % n) * x + (b % n) * inv) % n
    c, s = root_table(pm)
    re = math.fsum(c[idx])
    im = math.fsum(s[idx])
    if abs(im) >= REAL_TOL * math.sqrt(n):
        raise ArithmeticError(f"imaginary residue {im:.3e} in S({a},{b};{n})")
    return re


@numba.njit(cache=True)
def _direct_kernel(p, inv, cos_tab, sin_tab):  # pragma: no cover - jitted
    n = p - 1
    re = np.empty(n)
    im = np.empty(n)
    for a in range(1, p):
        # Neumaier summation in ascending x
        sr = 0.0
        cr = 0.0
        si = 0.0
        ci = 0.0
        ax = 0
        for x in range(1, p):
            ax += a
            if ax >= p:
                ax -= p
            t = ax + inv[x - 1]
            if t >= p:
                t -= p
            y = cos_tab[t]
            u = sr + y
            if abs(sr) >= abs(y):
                cr += (sr - u) + y
            else:
                cr += (y - u) + sr
            sr = u
            y = sin_tab[t]
            u = si + y
            if abs(si) >= abs(y):
                ci += (si - u) + y
            else:
                ci += (y - u) + si
            si = u
        re[a - 1] = sr + cr
        im[a - 1] = si + ci
    return re, im


def _direct(pm: PrimeModulus) -> tuple[np.ndarray, np.ndarray, float]:
    n = pm.p
    c, s = root_table(pm)
    re, im = _direct_kernel(n, inverse_table(pm).inv, c, s)
    # table entries are within 2^-54 each; compensated sum adds ~2 eps |S|
    err = EPS * (0.3 * n + 4.0 * math.sqrt(n) + 1.0)
    return re, im, err


def _transform(pm: PrimeModulus) -> tuple[np.ndarray, np.ndarray, float]:
    # S(a,1;p) = sum_x f(x) e(ax/p) with f(x) = e(xbar/p), f(0) = 0
    n = pm.p
    c, s = root_table(pm)
    f = np.zeros(n, dtype=np.complex128)
    f[1:] = c[inverse_table(pm).inv] + 1j * s[inverse_table(pm).inv]
    out = bluestein_dft(f, sign=1)[1:]
    err = 8.0 * EPS * n * math.log2(fft_size(n))
    return out.real.copy(), out.imag.copy(), err


@lru_cache(maxsize=256)
def _table(pm: PrimeModulus, method: str) -> KloostermanTable:
    if method == "direct":
        re, im, err = _direct(pm)
    elif method == "transform":
        re, im, err = _transform(pm)
    else:
        raise ValueError(f"unknown method {method!r}")
    max_imag = float(np.max(np.abs(im)))
    if max_imag >= REAL_TOL * math.sqrt(pm.p):
        raise ArithmeticError(f"imaginary residue {max_imag:.3e} at p={pm.p}")
    if np.any(np.abs(re) <= VANISH_TOL):
        a = int(np.argmin(np.abs(re))) + 1
        raise VanishingSumError(f"S({a},1;{pm.p}) is numerically zero")
    return KloostermanTable(pm, re, method, err, max_imag)


def kloosterman_table(p: int | PrimeModulus, method: str = "auto") -> KloostermanTable:
    """Tabulate S(a, 1; p) for every unit a.

    ``method`` is ``"direct"`` (O(p^2), compensated), ``"transform"``
    (O(p log p) chirp-z) or ``"auto"`` (direct up to ``DIRECT_LIMIT``).
    Tables are memoised per (p, method).
    """
    pm = as_prime(p)
    if method == "auto":
        method = "direct" if pm.p <= DIRECT_LIMIT else "transform"
    return _table(pm, method)


def angles(table: KloostermanTable) -> AngleTable:
    """Kloosterman angles theta in [0, pi] with S = 2 sqrt(p) cos(theta)."""
    x = table.normalized()
    excess = np.max(np.abs(x)) - 1.0
    if excess > 1e-9:
        raise ValueError(f"|S|/(2 sqrt p) exceeds 1 by {excess:.3e}; table is corrupt")
    theta = np.arccos(np.clip(x, -1.0, 1.0))
    theta.setflags(write=False)
    return AngleTable(table.p, theta)


@dataclass(frozen=True)
class WeilReport:
    p: int
    max_abs: float
    max_ratio: float
    weil_bound: float
    tolev_bound: float
    kloosterman_bound: float
    ordered: bool
    passed: bool


def weil_verify(table: KloostermanTable) -> WeilReport:
    """Compare max |S(a,1;p)| against the Weil, Tolev and Kloosterman bounds."""
    n = table.p.p
    m = float(np.max(np.abs(table.values)))
    weil = 2.0 * math.sqrt(n)
    tolev = math.sqrt(n + n**1.5)
    kloost = 3**0.25 * n**0.75
    return WeilReport(
        p=n,
        max_abs=m,
        max_ratio=m / weil,
        weil_bound=weil,
        tolev_bound=tolev,
        kloosterman_bound=kloost,
        ordered=weil <= tolev <= kloost,
        passed=m <= weil,
    )
