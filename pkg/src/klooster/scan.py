"""Per-prime check runner shared by the ``verify`` and ``scan`` commands."""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from .cache import TableCache
from .chebyshev import envelope_constants
from .etaseries import QSeries, eta_product_qexp
from .kloosterman import KloostermanTable, angles, weil_verify
from .moments import (
    abs_moment,
    asymptotic_envelopes,
    katz_sums,
    predicted_moment,
    sign_statistics,
    signed_moment,
    verify_exact_identities,
)
from .report import ReportRow, from_identity, from_katz, from_moment, from_signs, from_weil
from .twisted import character, tolev_identity_check, twisted_identity_check, twisted_sum

CHECKS = ("identities", "katz", "envelopes", "signs", "twisted")

TOLEV_SAMPLES = 5
TWISTED_SAMPLES = 3


@dataclass
class ScanConfig:
    pmin: int = 5
    pmax: int = 100
    kmax: int = 4
    checks: tuple[str, ...] = CHECKS
    out_path: Path | None = None
    format: str = "csv"
    cache_dir: Path | None = None
    jobs: int = 1
    use_cache: bool = True

    def __post_init__(self) -> None:
        if not 5 <= self.pmin <= self.pmax:
            raise ValueError(f"need 5 <= pmin <= pmax, got {self.pmin}, {self.pmax}")
        if self.kmax < 1:
            raise ValueError("kmax must be >= 1")
        bad = set(self.checks) - set(CHECKS)
        if bad:
            raise ValueError(f"unknown checks {sorted(bad)}")
        if self.format not in ("csv", "json"):
            raise ValueError(f"unknown format {self.format!r}")


@lru_cache(maxsize=4)
def _series(N: int) -> QSeries:
    return eta_product_qexp(N)


def series_for(p: int) -> QSeries:
    # round up so neighbouring primes share one expansion
    return _series(max(512, 1 << (p - 1).bit_length()))


def moment_rows(table: KloostermanTable, kmax: int, series: QSeries | None = None) -> list[ReportRow]:
    """One signed and one absolute row per k = 1..kmax, with the closed form
    where one exists and the explicit envelope for that power."""
    n = table.p.p
    rows = []
    for k in range(1, kmax + 1):
        v, va = signed_moment(table, k), abs_moment(table, k)
        m, odd = divmod(k, 2)
        c = envelope_constants(m)
        if odd:
            main, rad = 0.0, c.odd_radius(n)
            amain, arad = c.abs_main(n), c.abs_radius(n)
        else:
            main, rad = float(c.C_k) * n**m * (n - 1), c.even_radius(n)
            amain, arad = main, rad
        pred = predicted_moment(n, k, series) if k <= 6 else None
        ok = abs(v - main) <= rad
        resid = None
        if pred is not None:
            resid = abs(v - pred)
            ok = ok and resid < 0.1
        rows.append(ReportRow(n, k, "signed", v, None if pred is None else float(pred), resid, main, rad, ok, f"V{k}"))
        rows.append(ReportRow(n, k, "abs", va, None, None, amain, arad, abs(va - amain) <= arad, f"Vabs{k}"))
    return rows


def _twisted_rows(table: KloostermanTable) -> list[ReportRow]:
    n = table.p.p
    rng = random.Random(n)
    rows = []
    for _ in range(TOLEV_SAMPLES):
        a, b = rng.randrange(1, n), rng.randrange(1, n)
        rows.append(from_identity(tolev_identity_check(a, b, table.p, table), "tolev"))
    for _ in range(TWISTED_SAMPLES):
        j, a, b = rng.randrange(0, n - 1), rng.randrange(1, n), rng.randrange(1, n)
        chi = character(table.p, j)
        rows.append(from_identity(twisted_identity_check(chi, a, b), "twisted"))
        s = twisted_sum(chi, a, b)
        ok = s.within_bound or chi.is_principal
        rows.append(ReportRow(n, j, "twisted_bound", abs(s.value), None, None, 0.0, s.bound, ok, f"twisted_bound_a{a}_b{b}"))
    return rows


def check_prime(p: int, kmax: int, checks=CHECKS, table: KloostermanTable | None = None) -> list[ReportRow]:
    """Run the selected checks on one prime."""
    if table is None:
        from .kloosterman import kloosterman_table

        table = kloosterman_table(p)
    rows: list[ReportRow] = []
    if "identities" in checks:
        series = series_for(p) if p > 7 else None
        rows += [from_moment(r) for r in verify_exact_identities(table, series)]
    if "katz" in checks:
        rows.append(from_weil(weil_verify(table)))
        rows += [from_katz(r) for r in katz_sums(angles(table), kmax)]
    if "envelopes" in checks:
        rows += [from_moment(r) for r in asymptotic_envelopes(table, kmax)]
    if "signs" in checks:
        rows += from_signs(sign_statistics(table))
    if "twisted" in checks:
        rows += _twisted_rows(table)
    return rows


def _worker(args) -> list[ReportRow]:
    p, kmax, checks, cache_dir, use_cache = args
    if use_cache:
        table, _ = TableCache(cache_dir).get(p)
    else:
        table = None
    return check_prime(p, kmax, checks, table)


def run_scan(config: ScanConfig, primes: list[int]):
    """Yield the rows of each prime in ascending order."""
    tasks = [(p, config.kmax, tuple(config.checks), config.cache_dir, config.use_cache) for p in primes]
    if config.jobs <= 1 or len(tasks) <= 1:
        for t in tasks:
            yield t[0], _worker(t)
        return
    with ProcessPoolExecutor(max_workers=config.jobs) as pool:
        yield from zip(primes, pool.map(_worker, tasks))

