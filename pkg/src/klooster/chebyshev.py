"""Chebyshev polynomials of the second kind and the expansions built on them.

Two kinds of expansion are provided:

* x^(2k) and x^(2k+1) as finite sums of U_j (``even_power_coeffs``,
  ``odd_power_coeffs``);
* |x|^(2k+1) = a0 + sum_l c_l U_(2l)(x), an infinite series truncated at
  order L with a certified bound on the remainder (``abs_power_coeffs``).

The coefficients c_l are exact rationals times 2/pi.  For l > k they decay
like l^-(2k+2); the remainder bounds below rely on that rate, made explicit
through ``coefficient_majorant``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import numpy as np

DEFAULT_EXTRA_ORDER = 12


def default_order(k: int) -> int:
    return k + DEFAULT_EXTRA_ORDER


def cheb_u(k: int, x):
    """U_k(x) by the three-term recurrence.  Works on scalars and arrays."""
    if k < 0:
        raise ValueError("k must be >= 0")
    x = np.asarray(x, dtype=np.float64)
    prev = np.ones_like(x)
    if k == 0:
        return prev if prev.ndim else float(prev)
    cur = 2.0 * x
    for _ in range(k - 1):
        prev, cur = cur, 2.0 * x * cur - prev
    return cur if cur.ndim else float(cur)


def cheb_u_stack(kmax: int, x) -> np.ndarray:
    """Rows U_0(x) .. U_kmax(x)."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty((kmax + 1,) + x.shape)
    out[0] = 1.0
    if kmax >= 1:
        out[1] = 2.0 * x
    for j in range(2, kmax + 1):
        out[j] = 2.0 * x * out[j - 1] - out[j - 2]
    return out


@dataclass(frozen=True)
class PowerExpansion:
    """x^(2k) = sum_l coeffs[l] U_(2l)  or  x^(2k+1) = sum_l coeffs[l] U_(2l+1)."""

    k: int
    parity: str
    coeffs: tuple[float, ...]
    exact: tuple[Fraction, ...] = field(repr=False, default=())

    def degree(self, ell: int) -> int:
        return 2 * ell if self.parity == "even" else 2 * ell + 1

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        top = self.degree(self.k)
        us = cheb_u_stack(top, x)
        return sum(c * us[self.degree(i)] for i, c in enumerate(self.coeffs))


def _even_exact(k: int) -> list[Fraction]:
    pre = Fraction(factorial(2 * k), 4**k)
    return [pre * Fraction(2 * l + 1, factorial(k - l) * factorial(k + l + 1)) for l in range(k + 1)]


def _odd_exact(k: int, printed: bool = False) -> list[Fraction]:
    pre = Fraction(factorial(2 * k + 1), 4 ** (k + 1 if printed else k))
    return [pre * Fraction(l + 1, factorial(k - l) * factorial(k + l + 2)) for l in range(k + 1)]


def even_power_coeffs(k: int) -> PowerExpansion:
    if k < 0:
        raise ValueError("k must be >= 0")
    ex = _even_exact(k)
    return PowerExpansion(k, "even", tuple(float(c) for c in ex), tuple(ex))


def odd_power_coeffs(k: int, printed: bool = False) -> PowerExpansion:
    """Coefficients of x^(2k+1) in U_1, U_3, ...

    The default prefactor is (2k+1)!/4^k.  ``printed=True`` gives the
    variant with 4^(k+1), which is off by a factor 4 and reconstructs x
    as x/4 at k = 0; it exists only for comparison.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    ex = _odd_exact(k, printed)
    return PowerExpansion(k, "odd", tuple(float(c) for c in ex), tuple(ex))


def reconstruction_error(exp: PowerExpansion, x) -> float:
    x = np.asarray(x, dtype=np.float64)
    target = x ** exp.degree(exp.k)
    return float(np.max(np.abs(exp(x) - target)))


# --- |x|^(2k+1) --------------------------------------------------------------


def _cos_integral(s: int) -> Fraction:
    # integral_0^{pi/2} cos(s t) dt for odd s
    s = abs(s)
    return Fraction((-1) ** ((s - 1) // 2), s)


@lru_cache(maxsize=None)
def _cos_power_moment(n: int, m: int) -> Fraction:
    """integral_0^{pi/2} cos^n(t) cos(m t) dt for odd n, even m, exactly."""
    total = Fraction(0)
    for j in range(n + 1):
        r = n - 2 * j
        total += comb(n, j) * (_cos_integral(r - m) + _cos_integral(r + m)) / 2
    return total / 2**n


def abs_coefficient_rational(k: int, ell: int) -> Fraction:
    """c_(l,k) * pi / 2 as an exact rational (l = 0 gives a0 * pi / 2)."""
    n = 2 * k + 1
    m = 2 * ell
    return _cos_power_moment(n, m) - _cos_power_moment(n, m + 2)


def abs_coefficient(k: int, ell: int) -> float:
    """c_(l,k): coefficient of U_(2l) in |x|^(2k+1); l = 0 gives a0."""
    return 2.0 / math.pi * float(abs_coefficient_rational(k, ell))


def _gamma_moment(n: int, m: int) -> float:
    # same integral via the reflection formula: n! sin(pi z) / (2^(n+1) (z)_(n+1))
    z = Fraction(m - n, 2)
    prod = 1.0
    for i in range(n + 1):
        prod *= float(z + i)
    sign = 1.0 if (z - Fraction(1, 2)) % 2 == 0 else -1.0
    return factorial(n) * sign / (2.0 ** (n + 1) * prod)


def abs_coefficient_closed(k: int, ell: int) -> float:
    """c_(l,k) in floating point from the Gamma-function closed form.

    Cheap for large l; agrees with ``abs_coefficient``.
    """
    n = 2 * k + 1
    return 2.0 / math.pi * (_gamma_moment(n, 2 * ell) - _gamma_moment(n, 2 * ell + 2))


def coefficient_majorant(k: int, ell: int) -> float:
    """Rigorous bound |c_(l,k)| <= (4/pi) n! / 2^(n+1) / (l - k - 1/2)^(n+1), l > k."""
    if ell <= k:
        raise ValueError("majorant needs l >= k + 1")
    n = 2 * k + 1
    return 4.0 / math.pi * factorial(n) / 2.0 ** (n + 1) / (ell - k - 0.5) ** (n + 1)


def a0_closed_form(k: int) -> float:
    return 4 ** (k + 1) / (math.pi * (2 * k + 1) * (2 * k + 3) * comb(2 * k, k))


def printed_coefficient(k: int, m: int) -> float:
    """A two-factorial closed form for a_m (m even, m >= 2k+2).

    It disagrees with the exact coefficients; kept for diagnostics only.
    """
    h = m // 2
    f = factorial(2 * k + 1)
    t1 = (-1) ** (h + k + 1) * f / ((2 * k + 1 + m) * factorial(m - 2 * k - 1))
    t2 = (-1) ** (h + k) * f / ((2 * k + 3 + m) * factorial(m - 2 * k + 1))
    return 2.0 / math.pi * (t1 - t2)


def claimed_tail_bound(k: int, L: int) -> float:
    """3 / (2L - 2k)!, the factorial decay claimed for the truncation tail."""
    return 3.0 / factorial(2 * L - 2 * k)


def _weighted_tail(k: int, L: int, terms: int = 4096) -> float:
    """Upper bound on sum_(l > L) |c_l| (2l + 1); inf for k = 0."""
    if k == 0:
        return math.inf
    exact = 0.0
    M = L + terms
    for ell in range(L + 1, M + 1):
        exact += abs(abs_coefficient_closed(k, ell)) * (2 * ell + 1)
    # beyond M: (2l+1) K z^-s = K (2 z^(1-s) + (2k+2) z^-s), z = l - k - 1/2
    s = 2 * k + 2
    n = 2 * k + 1
    K = 4.0 / math.pi * factorial(n) / 2.0 ** (n + 1)
    z0 = M - k - 0.5
    rest = K * (2.0 * z0 ** (2 - s) / (s - 2) + (2 * k + 2) * z0 ** (1 - s) / (s - 1))
    # 1e-12 relative slack for rounding in the float sum
    return (exact + rest) * (1 + 1e-12)


def _grid_tail_sup(k: int, a0: float, c: np.ndarray, npts: int = 1 << 18) -> float:
    """sup over [-1,1] of the truncation remainder, certified on a grid.

    The remainder is even, so [0,1] suffices.  Between grid points it moves
    by at most Lip * h / 2, with Lip bounded through U_m'(1) = m(m+1)(m+2)/3.
    """
    n = 2 * k + 1
    L = c.shape[0]
    x = np.linspace(0.0, 1.0, npts + 1)
    us = cheb_u_stack(2 * L, x)
    approx = a0 + sum(c[l - 1] * us[2 * l] for l in range(1, L + 1))
    r = np.abs(x**n - approx)
    cell = np.maximum(r[:-1], r[1:])
    lip = n + sum(abs(c[l - 1]) * (2 * l) * (2 * l + 1) * (2 * l + 2) / 3.0 for l in range(1, L + 1))
    h = 1.0 / npts
    return float(np.max(cell)) + lip * h / 2 + 1e-12


@dataclass(frozen=True)
class AbsExpansion:
    """|x|^(2k+1) ~ a0 + sum_(l=1..L) c[l-1] U_(2l)(x).

    ``tail_bound`` bounds |remainder| uniformly on [-1, 1].
    ``weighted_tail`` bounds sum_(l>L) |c_l| (2l+1); infinite for k = 0,
    where the coefficients only decay like l^-2.
    """

    k: int
    a0: float
    c: np.ndarray = field(repr=False, compare=False)
    L: int
    tail_bound: float
    weighted_tail: float

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        us = cheb_u_stack(2 * self.L, x)
        return self.a0 + sum(self.c[l - 1] * us[2 * l] for l in range(1, self.L + 1))


@lru_cache(maxsize=64)
def abs_power_coeffs(k: int, L: int | None = None) -> AbsExpansion:
    if k < 0:
        raise ValueError("k must be >= 0")
    if L is None:
        L = default_order(k)
    if L < k + 1:
        raise ValueError(f"truncation order L={L} must be >= k+1={k + 1}")
    a0 = a0_closed_form(k)
    c = np.array([abs_coefficient(k, l) for l in range(1, L + 1)])
    c.setflags(write=False)
    weighted = _weighted_tail(k, L)
    tail = float(min(weighted, _grid_tail_sup(k, a0, c)))
    return AbsExpansion(k, a0, c, L, tail, weighted)


# --- explicit envelope constants ---------------------------------------------


@dataclass(frozen=True)
class EnvelopeConstants:
    """Explicit constants for the moment envelopes.

    |V_2k - C_k p^k (p-1)| <= D_k p^(k+1/2)
    |V_2k+1| <= E_k p^(k+1)
    |Vabs_2k+1 - 2^(2k+1) a0 p^(k+1/2) (p-1)| <= abs_radius(p)

    abs_radius(p) = F_k p^(k+1) whenever F_k is finite (k >= 1).
    """

    k: int
    L: int
    C_k: Fraction
    D_k: float
    E_k: float
    F_k: float
    E_k_printed: float
    a0: float
    abs_partial: float
    abs_tail_sup: float

    def even_radius(self, p: int) -> float:
        return self.D_k * p ** (self.k + 0.5)

    def odd_radius(self, p: int, printed: bool = False) -> float:
        return (self.E_k_printed if printed else self.E_k) * p ** (self.k + 1)

    def abs_main(self, p: int) -> float:
        return 2 ** (2 * self.k + 1) * self.a0 * p ** (self.k + 0.5) * (p - 1)

    def abs_main_printed(self, p: int) -> float:
        return self.a0 * p ** (self.k + 1.5)

    def abs_radius(self, p: int) -> float:
        scale = 2 ** (2 * self.k + 1) * p ** (self.k + 0.5)
        katz_only = self.F_k / 2 ** (2 * self.k + 1) * math.sqrt(p)
        truncated = self.abs_partial * math.sqrt(p) + (p - 1) * self.abs_tail_sup
        return scale * min(katz_only, truncated)


def _D(k: int) -> float:
    if k == 0:
        return 0.0
    s = sum(
        Fraction((2 * l + 1) ** 2, 2 * factorial(k - l) * factorial(k + l + 1)) for l in range(1, k + 1)
    )
    return float(factorial(2 * k) * s)


def _E(k: int) -> float:
    s = sum(Fraction((l + 1) ** 2, factorial(k - l) * factorial(k + l + 2)) for l in range(k + 1))
    return float(2 * factorial(2 * k + 1) * s)


@lru_cache(maxsize=64)
def envelope_constants(k: int, L: int | None = None) -> EnvelopeConstants:
    if k < 0:
        raise ValueError("k must be >= 0")
    ab = abs_power_coeffs(k, L)
    partial = float(sum(abs(ab.c[l - 1]) * (2 * l + 1) / 2 for l in range(1, ab.L + 1)))
    F = 2 ** (2 * k + 1) * (partial + ab.weighted_tail / 2)
    E = _E(k)
    return EnvelopeConstants(
        k=k,
        L=ab.L,
        C_k=Fraction(comb(2 * k, k), k + 1),
        D_k=_D(k),
        E_k=E,
        F_k=F,
        E_k_printed=E / 4,
        a0=ab.a0,
        abs_partial=partial,
        abs_tail_sup=float(ab.tail_bound),
    )
