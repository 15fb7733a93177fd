"""Dirichlet characters mod p and Kloosterman sums twisted by them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .chebyshev import cheb_u_stack
from .kloosterman import AngleTable, KloostermanTable, kloosterman_sum, kloosterman_table
from .transform import bluestein_dft
from .modarith import PrimeModulus, as_prime, inverse_table, legendre_table, primitive_root, root_table

IDENTITY_RTOL = 1e-6


@lru_cache(maxsize=32)
def discrete_log_table(p: int | PrimeModulus) -> tuple[int, np.ndarray]:
    """(g, dlog) with dlog[a - 1] = t such that g^t = a mod p."""
    pm = as_prime(p)
    n = pm.p
    g = primitive_root(pm)
    dlog = np.empty(n - 1, dtype=np.int64)
    x = 1
    for t in range(n - 1):
        dlog[x - 1] = t
        x = x * g % n
    dlog.setflags(write=False)
    return g, dlog


@dataclass(frozen=True)
class DirichletCharacter:
    """chi_j(g^t) = e(j t / (p - 1)); values[a - 1] = chi(a) for units a."""

    p: PrimeModulus
    g: int
    j: int
    values: np.ndarray = field(repr=False, compare=False)

    def __call__(self, a: int) -> complex:
        a %= self.p.p
        if a == 0:
            return 0j
        return complex(self.values[a - 1])

    @property
    def is_principal(self) -> bool:
        return self.j == 0

    @property
    def is_quadratic(self) -> bool:
        return 2 * self.j == self.p.p - 1

    @property
    def is_real(self) -> bool:
        return self.is_principal or self.is_quadratic

    def padded(self) -> np.ndarray:
        """chi on all residues 0..p-1 with chi(0) = 0."""
        out = np.zeros(self.p.p, dtype=np.complex128)
        out[1:] = self.values
        return out


def character(p: int | PrimeModulus, j: int) -> DirichletCharacter:
    pm = as_prime(p)
    n = pm.p
    if not 0 <= j <= n - 2:
        raise ValueError(f"character index must lie in [0, {n - 2}], got {j}")
    g, dlog = discrete_log_table(pm)
    # exponent j t mod (p-1), evaluated as an exact rational angle
    e = (j * dlog) % (n - 1)
    vals = np.exp(2j * np.pi * e / (n - 1))
    if 2 * j == n - 1:
        vals = np.where(e == 0, 1.0, -1.0).astype(np.complex128)
    elif j == 0:
        vals = np.ones(n - 1, dtype=np.complex128)
    vals.setflags(write=False)
    return DirichletCharacter(pm, g, j, vals)


@dataclass(frozen=True)
class TwistedSum:
    p: int
    a: int
    b: int
    j: int
    value: complex

    @property
    def bound(self) -> float:
        """2^(1/4) p^(3/4) for the quadratic character, else p^(3/4)."""
        return (2**0.25 if 2 * self.j == self.p - 1 else 1.0) * self.p**0.75

    @property
    def within_bound(self) -> bool:
        return abs(self.value) < self.bound


def _phases(p: int, a: int, b: int) -> np.ndarray:
    n = p
    x = np.arange(1, n, dtype=np.int64)
    return ((a % n) * x + (b % n) * inverse_table(n).inv) % n


def twisted_sum(chi: DirichletCharacter, a: int, b: int) -> TwistedSum:
    """S_chi(a, b; p) = sum_x chi(x) e((a x + b xbar) / p)."""
    n = chi.p.p
    if a % n == 0 or b % n == 0:
        raise ValueError(f"twisted sum needs p not dividing ab (a={a}, b={b}, p={n})")
    c, s = root_table(n)
    idx = _phases(n, a, b)
    w = chi.values
    re = math.fsum((w.real * c[idx] - w.imag * s[idx]).tolist())
    im = math.fsum((w.real * s[idx] + w.imag * c[idx]).tolist())
    return TwistedSum(n, a % n, b % n, chi.j, complex(re, im))


def twisted_table(chi: DirichletCharacter) -> np.ndarray:
    """S_chi(c, 1; p) for c = 1..p-1 as one length-p DFT.

    General arguments reduce through x -> b x: S_chi(a, b) = chi(b) S_chi(ab, 1).
    """
    n = chi.p.p
    c, s = root_table(n)
    inv = inverse_table(n).inv
    f = np.zeros(n, dtype=np.complex128)
    f[1:] = chi.values * (c[inv] + 1j * s[inv])
    return bluestein_dft(f, sign=1)[1:]


def phase_relation_residual(chi: DirichletCharacter, a: int, b: int) -> float:
    """|S_chi^2 - chi(-abar b) |S_chi|^2|."""
    n = chi.p.p
    s = twisted_sum(chi, a, b).value
    abar = inverse_table(n)[a]
    return abs(s * s - chi(-abar * b) * abs(s) ** 2)


# --- identities --------------------------------------------------------------


@dataclass(frozen=True)
class IdentityCheck:
    p: int
    a: int
    b: int
    j: int | None
    lhs: complex
    rhs: complex
    residual: float
    tolerance: float
    passed: bool
    rhs_printed: complex | None = None
    residual_printed: float | None = None

    @property
    def printed_passed(self) -> bool | None:
        if self.residual_printed is None:
            return None
        return self.residual_printed < self.tolerance


def tolev_identity_check(a: int, b: int, p: int | PrimeModulus, table: KloostermanTable | None = None) -> IdentityCheck:
    """S(a,b;p)^2 = p + sum_x ((x^2 - 4x)/p) S(a, bx; p).

    The x = 0 and x = 4 terms carry Legendre symbol 0 and are dropped.
    The left side is summed directly; the right side uses the table.
    """
    pm = as_prime(p)
    n = pm.p
    if a % n == 0 or b % n == 0:
        raise ValueError("Tolev identity needs p not dividing ab")
    if table is None:
        table = kloosterman_table(pm)
    lhs = kloosterman_sum(a, b, pm) ** 2
    leg = legendre_table(n)
    x = np.arange(n, dtype=np.int64)
    weights = leg[(x * x - 4 * x) % n].astype(np.float64)
    keep = weights != 0
    # S(a, bx; p) = S(abx, 1; p); x = 0 is excluded by its zero weight
    arg = ((a % n) * (b % n) % n * x[keep]) % n
    rhs = n + math.fsum((weights[keep] * table.values[arg - 1]).tolist())
    resid = abs(lhs - rhs)
    tol = IDENTITY_RTOL * n
    return IdentityCheck(n, a % n, b % n, None, lhs, rhs, resid, tol, resid < tol)


def tolev_bound(p: int) -> float:
    return math.sqrt(p + p**1.5)


@lru_cache(maxsize=8)
def _diagonal_sums(chi: DirichletCharacter) -> np.ndarray:
    """S_chi(x, x; p) for x = 1..p-1.

    S_chi(x,x) = sum_s w[s] e(x s / p) with w[s] = sum over y + ybar = s of chi(y).
    """
    n = chi.p.p
    y = np.arange(1, n, dtype=np.int64)
    s = (y + inverse_table(n).inv) % n
    w = np.zeros(n, dtype=np.complex128)
    np.add.at(w, s, chi.values)
    out = np.fft.ifft(w) * n
    return out[1:]


def twisted_identity_check(chi: DirichletCharacter, a: int, b: int) -> IdentityCheck:
    """|S_chi(a,b)|^2 = p + sum_x S_chi(x,x) e(-(2x + ab xbar) / p).

    The constant term is p.  The variant with p - 1 is evaluated alongside
    (``rhs_printed``); it is off by exactly 1 for every character.
    """
    n = chi.p.p
    if a % n == 0 or b % n == 0:
        raise ValueError("twisted identity needs p not dividing ab")
    lhs = abs(twisted_sum(chi, a, b).value) ** 2
    diag = _diagonal_sums(chi)
    c, s = root_table(n)
    ab = (a % n) * (b % n) % n
    idx = (-(2 * np.arange(1, n, dtype=np.int64) + ab * inverse_table(n).inv)) % n
    terms = diag * (c[idx] + 1j * s[idx])
    tail = complex(math.fsum(terms.real.tolist()), math.fsum(terms.imag.tolist()))
    rhs = n + tail
    rhs_printed = (n - 1) + tail
    tol = IDENTITY_RTOL * n
    resid = abs(lhs - rhs)
    return IdentityCheck(n, a % n, b % n, chi.j, complex(lhs), rhs, resid, tol, resid < tol,
                         rhs_printed, abs(lhs - rhs_printed))


# --- twisted moments ---------------------------------------------------------


@dataclass(frozen=True)
class TwistedRatio:
    p: int
    j: int
    k: int
    quantity: str
    ratio: float
    tag: str = ""


def twisted_moment_ratios(chi: DirichletCharacter, ang: AngleTable, kmax: int) -> list[TwistedRatio]:
    """Normalized twisted moments; diagnostics only, nothing is asserted.

    For each k: |sum chi(a) U_k(cos theta)| / sqrt p, |sum chi S^2k| / p^(k+1/2),
    |sum chi S^(2k+1)| / p^(k+1), |sum chi |S|^(2k+1)| / p^(k+1).
    """
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    n = chi.p.p
    tag = "" if not chi.is_real else ("principal" if chi.is_principal else "quadratic")
    x = ang.cos()
    us = cheb_u_stack(kmax, x)
    sv = 2.0 * math.sqrt(n) * x
    w = chi.values
    rows = []

    def mag(vals: np.ndarray) -> float:
        t = w * vals
        return abs(complex(math.fsum(t.real.tolist()), math.fsum(t.imag.tolist())))

    for k in range(1, kmax + 1):
        rows.append(TwistedRatio(n, chi.j, k, "U_k", mag(us[k]) / math.sqrt(n), tag))
        rows.append(TwistedRatio(n, chi.j, k, "S^2k", mag(sv ** (2 * k)) / n ** (k + 0.5), tag))
        rows.append(TwistedRatio(n, chi.j, k, "S^(2k+1)", mag(sv ** (2 * k + 1)) / n ** (k + 1), tag))
        rows.append(TwistedRatio(n, chi.j, k, "|S|^(2k+1)", mag(np.abs(sv) ** (2 * k + 1)) / n ** (k + 1), tag))
    return rows
