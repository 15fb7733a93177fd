"""Power moments of Kloosterman sums and the checks built on them.

V_k(p) = sum_a S(a,1;p)^k and Vabs_k(p) = sum_a |S(a,1;p)|^k, over units a.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .chebyshev import cheb_u_stack, envelope_constants
from .etaseries import QSeries, b_p
from .kloosterman import AngleTable, KloostermanTable
from .modarith import PrimeModulus, as_prime, legendre

EPS = float(np.finfo(np.float64).eps)

IDENTITY_TOL = 0.1
PRECISION_LIMIT = 0.25
EXACT_PMAX = 5000
SPLIT_RTOL = 1e-6
NORMALIZED_RTOL = 1e-10


class PrecisionError(ArithmeticError):
    """Double precision cannot certify an exact integer identity."""


def _power_sum(table: KloostermanTable, k: int, absolute: bool) -> tuple[float, float]:
    if k < 1:
        raise ValueError("k must be >= 1")
    n = table.p.p
    t = table.normalized()
    if absolute:
        t = np.abs(t)
    terms = t**k
    total = math.fsum(terms.tolist())
    # (2 sqrt p)^k, exact integer part times at most one sqrt
    scale = float(4 ** (k // 2) * n ** (k // 2))
    if k % 2:
        scale *= 2.0 * math.sqrt(n)
    value = total * scale
    s = np.abs(table.values)
    bound = (
        k * float(np.sum(s ** (k - 1))) * table.value_error
        + (2 * k + 3) * EPS * float(np.sum(s**k))
        + EPS * abs(value)
    )
    return value, bound


def moment_with_error(table: KloostermanTable, k: int, absolute: bool = False) -> tuple[float, float]:
    """(moment, bound on its rounding error)."""
    return _power_sum(table, k, absolute)


def signed_moment(table: KloostermanTable, k: int, exact: bool = False) -> float:
    """V_k(p).  With ``exact=True`` raise PrecisionError when the rounding
    bound is too large to pin down an integer."""
    value, bound = _power_sum(table, k, False)
    if exact and bound > PRECISION_LIMIT:
        raise PrecisionError(f"V_{k}({table.p.p}) rounding bound {bound:.3g} > {PRECISION_LIMIT}")
    return value


def abs_moment(table: KloostermanTable, k: int, exact: bool = False) -> float:
    value, bound = _power_sum(table, k, True)
    if exact and bound > PRECISION_LIMIT:
        raise PrecisionError(f"Vabs_{k}({table.p.p}) rounding bound {bound:.3g} > {PRECISION_LIMIT}")
    return value


# --- a_p ---------------------------------------------------------------------

INERT = frozenset({7, 11, 13, 14})


@dataclass(frozen=True)
class QuadFormTrace:
    p: int
    case_tag: str
    a_p: int


def _representations(p: int, cu: int, cv: int) -> list[tuple[int, int]]:
    out = []
    for u in range(math.isqrt(p // cu) + 1):
        r = p - cu * u * u
        if r % cv:
            continue
        v = math.isqrt(r // cv)
        if cv * v * v == r:
            out.append((u, v))
    return out


def a_p(p: int | PrimeModulus) -> QuadFormTrace:
    """Trace a_p from the forms 3u^2 + 5v^2 and x^2 + 15y^2 (p > 5)."""
    n = as_prime(p).p
    if n <= 5:
        raise ValueError("a_p is defined for p > 5")
    r = n % 15
    if r in INERT:
        return QuadFormTrace(n, "inert", 0)
    if r in (2, 8):
        tag, reps = "three_five", _representations(n, 3, 5)
        vals = {2 * n - 12 * u * u for u, _ in reps}
    else:
        tag, reps = "one_fifteen", _representations(n, 1, 15)
        vals = {4 * x * x - 2 * n for x, _ in reps}
    if not vals:
        raise ArithmeticError(f"no representation of {n} for case {tag}")
    if len(vals) > 1:
        raise ArithmeticError(f"representations of {n} give different traces {sorted(vals)}")
    val = vals.pop()
    if abs(val) >= 2 * n:
        raise ArithmeticError(f"|a_{n}| = {abs(val)} violates |a_p| < 2p")
    return QuadFormTrace(n, tag, val)


# --- exact identities --------------------------------------------------------


def predicted_moment(p: int, k: int, series: QSeries | None = None) -> int | None:
    """Closed-form V_k(p) for k <= 6, or None where no identity applies."""
    l3 = legendre(p, 3)
    if k == 1:
        return 1
    if k == 2:
        return p * p - p - 1
    if k == 3:
        return l3 * p * p + 2 * p + 1
    if k == 4:
        return 2 * p**3 - 3 * p * p - 3 * p - 1
    if k == 5:
        if p <= 5:
            return None
        return l3 * 4 * p**3 + (a_p(p).a_p + 5) * p * p + 4 * p + 1
    if k == 6:
        if p <= 7 or series is None or p > series.N:
            return None
        return 5 * p**4 - 10 * p**3 - (b_p(p, series) + 9) * p * p - 5 * p - 1
    return None


@dataclass(frozen=True)
class MomentReport:
    p: int
    k: int
    kind: str
    identity: str
    V_k: float
    Vabs_k: float
    predicted: float | None
    residual: float | None
    envelope_main: float | None
    envelope_radius: float | None
    passed: bool
    note: str = ""

    @property
    def value(self) -> float:
        return self.Vabs_k if self.kind == "abs" else self.V_k

    def asdict(self) -> dict:
        d = asdict(self)
        d["value"] = self.value
        return d


def verify_exact_identities(
    table: KloostermanTable, series: QSeries | None = None, mode: str = "auto"
) -> list[MomentReport]:
    """Check V_1..V_6 against their closed forms.

    ``mode="exact"`` compares integers (tolerance 0.1) and propagates
    PrecisionError; ``"normalized"`` compares relative to (2 sqrt p)^k (p-1);
    ``"auto"`` uses exact when p <= 5000 and the rounding bound allows it.
    """
    n = table.p.p
    out = []
    for k in range(1, 7):
        pred = predicted_moment(n, k, series)
        if pred is None:
            continue
        value, bound = _power_sum(table, k, False)
        vabs = abs_moment(table, k)
        use_exact = mode == "exact" or (mode == "auto" and n <= EXACT_PMAX and bound <= PRECISION_LIMIT)
        residual = abs(value - pred)
        if use_exact:
            if bound > PRECISION_LIMIT:
                raise PrecisionError(f"V_{k}({n}) rounding bound {bound:.3g} > {PRECISION_LIMIT}")
            ok, note = residual < IDENTITY_TOL, "exact"
        else:
            scale = (2 * math.sqrt(n)) ** k * (n - 1)
            ok, note = residual / scale < NORMALIZED_RTOL, "normalized"
        out.append(MomentReport(n, k, "signed", f"V{k}", value, vabs, float(pred), residual, None, None, ok, note))
    return out


# --- Katz sums ---------------------------------------------------------------


@dataclass(frozen=True)
class KatzRow:
    p: int
    k: int
    total: float
    bound: float
    passed: bool


def katz_sums(ang: AngleTable, kmax: int) -> list[KatzRow]:
    """sum_a U_k(cos theta_p(a)) against (k+1) sqrt(p) / 2, k = 1..kmax."""
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    n = ang.p.p
    us = cheb_u_stack(kmax, ang.cos())
    rows = []
    for k in range(1, kmax + 1):
        total = math.fsum(us[k].tolist())
        bound = 0.5 * (k + 1) * math.sqrt(n)
        rows.append(KatzRow(n, k, total, bound, abs(total) <= bound))
    return rows


# --- envelopes ---------------------------------------------------------------


def asymptotic_envelopes(
    table: KloostermanTable, kmax: int, L: int | None = None, abs_kmax: int | None = None
) -> list[MomentReport]:
    """Explicit envelopes: even moments for k = 1..kmax, odd moments for
    k = 0..kmax, absolute odd moments for k = 0..abs_kmax (default kmax - 1).
    """
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    n = table.p.p

    def consts(k: int):
        return envelope_constants(k, None if L is None else max(L, k + 1))

    out = []
    for k in range(1, kmax + 1):
        c = consts(k)
        v = signed_moment(table, 2 * k)
        main = float(c.C_k) * n**k * (n - 1)
        rad = c.even_radius(n)
        out.append(
            MomentReport(n, 2 * k, "signed", f"even_envelope_k{k}", v, abs_moment(table, 2 * k),
                         None, abs(v - main), main, rad, abs(v - main) <= rad)
        )
    for k in range(0, kmax + 1):
        c = consts(k)
        v = signed_moment(table, 2 * k + 1)
        rad = c.odd_radius(n)
        out.append(
            MomentReport(n, 2 * k + 1, "signed", f"odd_envelope_k{k}", v, abs_moment(table, 2 * k + 1),
                         None, abs(v), 0.0, rad, abs(v) <= rad)
        )
    top = kmax - 1 if abs_kmax is None else abs_kmax
    for k in range(0, top + 1):
        c = consts(k)
        va = abs_moment(table, 2 * k + 1)
        main = c.abs_main(n)
        rad = c.abs_radius(n)
        out.append(
            MomentReport(n, 2 * k + 1, "abs", f"abs_envelope_k{k}", signed_moment(table, 2 * k + 1), va,
                         None, abs(va - main), main, rad, abs(va - main) <= rad)
        )
    return out


def odd_envelope_printed(table: KloostermanTable, k: int) -> MomentReport:
    """Odd envelope with the constant implied by the uncorrected x^(2k+1) expansion."""
    n = table.p.p
    c = envelope_constants(k)
    v = signed_moment(table, 2 * k + 1)
    rad = c.odd_radius(n, printed=True)
    return MomentReport(n, 2 * k + 1, "signed", f"odd_envelope_printed_k{k}", v, abs_moment(table, 2 * k + 1),
                        None, abs(v), 0.0, rad, abs(v) <= rad)


# --- sign statistics ---------------------------------------------------------

PRINTED_POS_SUM = 1 / (3 * math.pi)
DERIVED_POS_SUM = 4 / (3 * math.pi)
PRINTED_POS_COUNT = 4 / (9 * math.pi**2)
DERIVED_POS_COUNT = 16 / (9 * math.pi**2)


@dataclass(frozen=True)
class SignStats:
    p: int
    pos_count: int
    neg_count: int
    pos_sum: float
    neg_sum: float
    zero_flag: bool


@dataclass(frozen=True)
class SignReport:
    stats: SignStats
    V1: float
    V2: float
    Vabs1: float
    split_residual: float
    split_ok: bool
    cauchy_pos_ok: bool
    cauchy_neg_ok: bool
    pos_sum_ratio: float
    pos_count_ratio: float
    neg_count_ratio: float
    printed_pos_sum: float = PRINTED_POS_SUM
    derived_pos_sum: float = DERIVED_POS_SUM
    printed_pos_count: float = PRINTED_POS_COUNT
    derived_pos_count: float = DERIVED_POS_COUNT

    @property
    def passed(self) -> bool:
        return self.split_ok and self.cauchy_pos_ok and self.cauchy_neg_ok


def sign_statistics(table: KloostermanTable, zero_tol: float = 1e-9) -> SignReport:
    """Split the sums by sign and certify the Cauchy-Schwarz lower bounds.

    pos_count >= pos_sum^2 / V_2 holds exactly; the reported ratios
    pos_sum / p^(3/2) and pos_count / p are compared against constants
    elsewhere.
    """
    n = table.p.p
    v = table.values
    zero = bool(np.any(np.abs(v) <= zero_tol))
    pos, neg = v[v > 0], v[v < 0]
    stats = SignStats(n, int(pos.size), int(neg.size), math.fsum(pos.tolist()), math.fsum(neg.tolist()), zero)
    if zero:
        raise ArithmeticError(f"S(a,1;{n}) vanishes numerically; sign split aborted")
    V1 = signed_moment(table, 1)
    V2 = signed_moment(table, 2)
    A1 = abs_moment(table, 1)
    half = (V1 + A1) / 2
    resid = abs(stats.pos_sum - half)
    # V2 dominates each partial sum of squares
    cs_pos = stats.pos_sum**2 <= stats.pos_count * V2
    cs_neg = stats.neg_sum**2 <= stats.neg_count * V2
    return SignReport(
        stats=stats,
        V1=V1,
        V2=V2,
        Vabs1=A1,
        split_residual=resid,
        split_ok=resid <= SPLIT_RTOL * abs(half),
        cauchy_pos_ok=cs_pos,
        cauchy_neg_ok=cs_neg,
        pos_sum_ratio=stats.pos_sum / n**1.5,
        pos_count_ratio=stats.pos_count / n,
        neg_count_ratio=stats.neg_count / n,
    )
