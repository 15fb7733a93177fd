"""Acceptance suite: one check per criterion, each at its stated tolerance.

Run directly (``python3 tests/test_acceptance.py``) for one PASS/FAIL line
per criterion, or through pytest, where the same lines are printed in the
terminal summary.
"""

from __future__ import annotations

import math
import random
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))
from conftest import sampled_primes  # noqa: E402

from klooster.chebyshev import envelope_constants, odd_power_coeffs, reconstruction_error
from klooster.etaseries import b_p, eta_product_qexp
from klooster.kloosterman import angles, kloosterman_table, weil_verify
from klooster.modarith import primes_between
from klooster.moments import (
    DERIVED_POS_SUM,
    PRINTED_POS_SUM,
    abs_moment,
    katz_sums,
    odd_envelope_printed,
    predicted_moment,
    sign_statistics,
    signed_moment,
)
from klooster.twisted import (
    character,
    tolev_identity_check,
    twisted_identity_check,
    twisted_sum,
    twisted_table,
)

SAMPLE = sampled_primes(5000)
SERIES = eta_product_qexp(600)
LARGE_P = 10007


@dataclass
class Result:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number}. {self.title}: {self.detail} ({self.seconds:.1f}s)"


RESULTS: dict[int, Result] = {}


def _record(number: int, title: str):
    def wrap(fn):
        def run() -> Result:
            if number not in RESULTS:
                t0 = time.perf_counter()
                ok, detail = fn()
                RESULTS[number] = Result(number, title, bool(ok), detail, time.perf_counter() - t0)
            return RESULTS[number]

        run.__name__ = fn.__name__
        return run

    return wrap


@_record(1, "exact moment identities")
def criterion_1():
    worst, bad = 0.0, []
    for p in primes_between(5, 2000):
        t = kloosterman_table(p, "direct")
        ks = [1, 2, 3, 4] + ([5] if p >= 7 else []) + ([6] if 11 <= p <= 500 else [])
        for k in ks:
            r = abs(signed_moment(t, k) - predicted_moment(p, k, SERIES))
            worst = max(worst, r)
            if not r < 0.1:
                bad.append((p, k, r))
    return not bad, f"worst residual {worst:.3g} (< 0.1), {len(bad)} failures"


@_record(2, "b_p from eta expansion equals b_p from the sixth moment")
def criterion_2():
    bad = []
    for p in primes_between(11, 500):
        v6 = round(signed_moment(kloosterman_table(p), 6))
        num = 5 * p**4 - 10 * p**3 - 9 * p * p - 5 * p - 1 - v6
        inverted = num // (p * p) if num % (p * p) == 0 else None
        eta = b_p(p, SERIES)
        if inverted != eta or not abs(eta) < 2 * p**1.5:
            bad.append(p)
    return not bad, f"{len(primes_between(11, 500)) - len(bad)} primes agree, mismatches {bad}"


@_record(3, "Weil bound and Katz sums k <= 30")
def criterion_3():
    weil_bad, katz_bad, worst = [], 0, 0.0
    for p in SAMPLE:
        t = kloosterman_table(p)
        if not weil_verify(t).passed:
            weil_bad.append(p)
        for row in katz_sums(angles(t), 30):
            worst = max(worst, abs(row.total) / row.bound)
            katz_bad += not row.passed
    return not weil_bad and not katz_bad, (
        f"{len(SAMPLE)} primes, Weil violations {len(weil_bad)}, Katz violations {katz_bad}, worst ratio {worst:.3f}"
    )


@_record(4, "explicit moment envelopes")
def criterion_4():
    consts = [envelope_constants(k) for k in range(5)]
    const_ok = (
        [float(c.C_k) for c in consts[1:4]] == [1.0, 2.0, 5.0]
        and consts[1].D_k == 1.5
        and (consts[0].E_k, consts[1].E_k) == (1.0, 4.0)
    )
    bad, worst = [], 0.0
    for p in SAMPLE:
        t = kloosterman_table(p)
        for k in range(1, 5):
            c = consts[k]
            dev = abs(signed_moment(t, 2 * k) - float(c.C_k) * p**k * (p - 1))
            worst = max(worst, dev / c.even_radius(p))
            if dev > c.even_radius(p):
                bad.append((p, "even", k))
        for k in range(0, 5):
            c = consts[k]
            if abs(signed_moment(t, 2 * k + 1)) > c.odd_radius(p):
                bad.append((p, "odd", k))
        for k in range(0, 4):
            c = consts[k]
            dev = abs(abs_moment(t, 2 * k + 1) - c.abs_main(p))
            # F_0 is infinite, so k = 0 uses the finite truncated radius
            radius = c.F_k * p ** (k + 1) if k else c.abs_radius(p)
            if dev > radius:
                bad.append((p, "abs", k))
    return const_ok and not bad, f"constants ok={const_ok}, violations {len(bad)}, worst even ratio {worst:.3f}"


@_record(5, "rejecting the off-by-four odd power expansion")
def criterion_5():
    grid = np.linspace(-1, 1, 100)
    printed = odd_power_coeffs(0, printed=True)
    printed_rejected = reconstruction_error(printed, grid) > 1e-10 and np.allclose(printed(grid), grid / 4)
    corrected_ok = all(reconstruction_error(odd_power_coeffs(k), grid) < 1e-10 for k in range(0, 8))
    t7 = kloosterman_table(7)
    rep_printed = odd_envelope_printed(t7, 1)
    v3 = signed_moment(t7, 3)
    env_printed_fails = (not rep_printed.passed) and round(v3) == 64 and rep_printed.envelope_radius == 49
    env_corrected = abs(v3) <= envelope_constants(1).odd_radius(7)
    ok = printed_rejected and corrected_ok and env_printed_fails and env_corrected
    return ok, (
        f"printed rejected={printed_rejected}, corrected within 1e-10={corrected_ok}, "
        f"E1=1 fails at p=7 (V3={v3:.0f} > 49)={env_printed_fails}, E1=4 passes={env_corrected}"
    )


@_record(6, "sign statistics and derived constants")
def criterion_6():
    bad = []
    for p in SAMPLE:
        rep = sign_statistics(kloosterman_table(p))
        if not (rep.split_ok and rep.cauchy_pos_ok and rep.cauchy_neg_ok):
            bad.append(p)
    t = kloosterman_table(LARGE_P)
    rep = sign_statistics(t)
    pos_ratio = rep.stats.pos_sum / LARGE_P**1.5
    vabs_ratio = abs_moment(t, 1) / LARGE_P**1.5
    windows = 0.40 <= pos_ratio <= 0.45 and 0.80 <= vabs_ratio <= 0.90
    derived_in = 0.40 <= DERIVED_POS_SUM <= 0.45 and 0.80 <= 2 * DERIVED_POS_SUM <= 0.90
    # the printed constants must fall outside the empirical windows
    printed_pos = PRINTED_POS_SUM
    printed_vabs = envelope_constants(0).abs_main_printed(LARGE_P) / LARGE_P**1.5
    printed_out = not 0.40 <= printed_pos <= 0.45 and not 0.80 <= printed_vabs <= 0.90
    ok = not bad and windows and derived_in and printed_out
    return ok, (
        f"split/Cauchy-Schwarz failures {len(bad)}; p={LARGE_P}: pos_sum/p^1.5={pos_ratio:.4f}, "
        f"Vabs1/p^1.5={vabs_ratio:.4f}; printed 1/(3pi)={printed_pos:.4f} and 4/(3pi)={printed_vabs:.4f} "
        f"outside windows={printed_out}"
    )


def _twisted_parts():
    rng = random.Random(20240601)
    tolev_bad, tolev_worst = 0, 0.0
    for p in primes_between(5, 500):
        table = kloosterman_table(p)
        for _ in range(100):
            chk = tolev_identity_check(rng.randrange(1, p), rng.randrange(1, p), p, table)
            tolev_worst = max(tolev_worst, chk.residual / p)
            tolev_bad += not chk.residual < 1e-6 * p
    printed_bad = corrected_bad = phase_bad = samples = 0
    phase_worst = 0.0
    for p in primes_between(5, 300):
        for _ in range(20):
            chi = character(p, rng.randrange(0, p - 1))
            a, b = rng.randrange(1, p), rng.randrange(1, p)
            chk = twisted_identity_check(chi, a, b)
            samples += 1
            printed_bad += not chk.residual_printed < 1e-6 * p
            corrected_bad += not chk.residual < 1e-6 * p
            s = twisted_sum(chi, a, b).value
            ph = abs(s * s - chi(-pow(a, -1, p) * b) * abs(s) ** 2)
            phase_worst = max(phase_worst, ph)
            phase_bad += not ph < 1e-9
    bound_bad = 0
    for p in primes_between(5, 100):
        for j in range(1, p - 1):
            chi = character(p, j)
            tab = twisted_table(chi)
            vals = np.abs(tab)
            bound = (2**0.25 if chi.is_quadratic else 1.0) * p**0.75
            # |S_chi(a,b)| = |S_chi(ab,1)|, so the table covers every (a,b)
            bound_bad += int(np.sum(vals >= bound))
            c = np.arange(1, p)
            ph = np.abs(tab**2 - np.array([chi(-pow(int(x), -1, p)) for x in c]) * vals**2)
            phase_worst = max(phase_worst, float(np.max(ph)))
            phase_bad += int(np.sum(ph >= 1e-9))
    return dict(
        tolev_bad=tolev_bad, tolev_worst=tolev_worst, printed_bad=printed_bad, corrected_bad=corrected_bad,
        samples=samples, bound_bad=bound_bad, phase_bad=phase_bad, phase_worst=phase_worst,
    )


_TWISTED: dict = {}


def twisted_parts():
    if not _TWISTED:
        _TWISTED.update(_twisted_parts())
    return _TWISTED


@_record(7, "twisted suite")
def criterion_7():
    d = twisted_parts()
    ok = not (d["tolev_bad"] or d["printed_bad"] or d["bound_bad"] or d["phase_bad"])
    return ok, (
        f"Tolev failures {d['tolev_bad']}; twisted identity with constant p-1: "
        f"{d['printed_bad']}/{d['samples']} fail (with constant p: {d['corrected_bad']} fail); "
        f"bound violations {d['bound_bad']}; phase failures {d['phase_bad']} (worst {d['phase_worst']:.2g})"
    )


@_record(8, "direct and transform tables agree")
def criterion_8():
    worst = 0.0
    for p in primes_between(5, 2000):
        d = kloosterman_table(p, "direct").values
        f = kloosterman_table(p, "transform").values
        worst = max(worst, float(np.max(np.abs(d - f))) / math.sqrt(p))
    return worst < 1e-7, f"worst |direct - transform| / sqrt p = {worst:.3g} (< 1e-7)"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8]


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda f: f.__name__)
def test_criterion(criterion):
    res = criterion()
    assert res.passed, res.line()


def test_twisted_identity_with_constant_p():
    # companion to criterion 7: the same samples pass once the constant is p
    d = twisted_parts()
    assert d["corrected_bad"] == 0 and d["tolev_bad"] == 0 and d["bound_bad"] == 0 and d["phase_bad"] == 0


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    for r in results:
        print(r.line())
    sys.exit(0 if all(r.passed for r in results) else 1)
