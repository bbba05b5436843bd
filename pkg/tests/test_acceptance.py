"""Acceptance gate: every criterion at its stated tolerance and runtime.

Each test prints one [PASS]/[FAIL] line (run with -s to see them inline).
Batteries reuse the shipped suite seeds, so `ergolab suite ...` runs the
same bundles.
"""

import math
import os
import time
from fractions import Fraction

import numpy as np
import pytest

from ergolab.averaging import sup_trig
from ergolab.batteries import (
    assani_battery,
    cubic_battery,
    draw_cubic,
    draw_rng,
    draw_selfjoining,
    gowers_battery,
    hk_oracle_battery,
    quadratic_phase_check,
    selfjoining_battery,
    vdc_battery,
    ww_tail_diagnostic,
)
from ergolab.cli import main
from ergolab.joinings import empirical_selfjoining, selfjoining_correlation
from ergolab.suites import QUAD_PHASES
from ergolab.windows import SequenceWindow


def report(num, name, ok, elapsed=None, limit=None):
    status = "PASS" if ok else "FAIL"
    timing = ""
    if elapsed is not None:
        timing = f"  [{elapsed:.1f}s" + (f" / limit {limit}s]" if limit else "]")
    print(f"\n[{status}] criterion {num}: {name}{timing}")


def test_criterion_1_van_der_corput():
    t0 = time.perf_counter()
    result = vdc_battery(1000, 512, 20240811)
    elapsed = time.perf_counter() - t0
    report(1, "van der Corput inequality on 1000 random complex windows",
           result.verdict, elapsed, 30)
    assert result.verdict, result.summary
    assert elapsed <= 30.0


def test_criterion_2_assani_chain():
    t0 = time.perf_counter()
    result = assani_battery(1000, 128, 20240812)
    elapsed = time.perf_counter() - t0
    report(2, "Assani chain on 1000 random real windows (certified sup)",
           result.verdict, elapsed, 60)
    assert result.verdict, result.summary
    assert elapsed <= 60.0


def _brute_force_sup_check(seed, draws_to_check, oversample=8, grid=4096):
    """Inner sups of the k=3 estimate, cross-checked on a dense direct grid."""
    for i in draws_to_check:
        N, wins = draw_cubic(draw_rng(seed, i), 3, 16)
        a4 = wins[3].rebased(0)
        a5 = wins[4].rebased(0)
        ts = np.arange(grid) / grid
        phases = np.exp(2j * np.pi * np.outer(ts, np.arange(N)))
        for h1 in range(N):
            coeffs = a4[:N] * a5[h1 : h1 + N]
            sup = sup_trig(SequenceWindow(0, coeffs, 1.0), oversample)
            brute_max = float(np.max(np.abs(phases @ coeffs)))
            brute_cert = brute_max / (1.0 - np.pi * (N - 1) / grid)
            lo = max(sup.grid_max, brute_max)
            hi = min(sup.certified_upper, brute_cert)
            if lo > hi * (1 + 1e-9) + 1e-12:
                return False
    return True


def test_criterion_3_cubic_estimate():
    t0 = time.perf_counter()
    r3 = cubic_battery(3, 200, 16, 20240813)
    r4 = cubic_battery(4, 50, 8, 20240814)
    brute_ok = _brute_force_sup_check(20240813, range(10))
    elapsed = time.perf_counter() - t0
    ok = r3.verdict and r4.verdict and brute_ok
    report(3, "cubic estimate (k=3 x200, k=4 x50) + 10 brute-force sup checks",
           ok, elapsed, 300)
    assert r3.verdict, r3.summary
    assert r4.verdict, r4.summary
    assert brute_ok
    assert elapsed <= 300.0


@pytest.fixture(scope="module")
def gowers_result():
    t0 = time.perf_counter()
    result = gowers_battery((5, 7, 11, 13), 50, 3, 20240815)
    result.extras["elapsed"] = time.perf_counter() - t0
    return result


def test_criterion_4_gowers_monotonicity(gowers_result):
    ok = gowers_result.summary["mono_failures"] == 0
    report(4, "box-norm monotonicity U^k <= U^(k+1) on 200 functions",
           ok, gowers_result.extras["elapsed"], 120)
    assert ok, gowers_result.summary
    assert gowers_result.extras["elapsed"] <= 120.0


def test_criterion_5_u2_fourier_identity(gowers_result):
    ok = gowers_result.summary["fourier_failures"] == 0
    report(5, "U^2^4 equals the DFT fourth moment on the same battery", ok)
    assert ok, gowers_result.summary


def test_criterion_6_recursion_oracle_equivalence():
    result = hk_oracle_battery(40, 20240816, p_max=13, k_max=3)
    report(6, "orbit seminorm estimator equals cyclic norm at period scales",
           result.verdict)
    assert result.verdict, result.summary


def _hand_oracle(sys, q) -> float:
    """(1/period) sum_n mu(all T^(-a_i n) A_i) by naive table composition."""
    table = list(sys.table)
    p = len(table)
    inverse = [0] * p
    for i, v in enumerate(table):
        inverse[v] = i

    def power_table(a):
        step = table if a >= 0 else inverse
        t = list(range(p))
        for _ in range(abs(a)):
            t = [step[v] for v in t]
        return t

    seen = [False] * p
    order = 1
    for start in range(p):
        if seen[start]:
            continue
        length, j = 0, start
        while not seen[j]:
            seen[j] = True
            length += 1
            j = table[j]
        order = math.lcm(order, length)

    steps = [power_table(a) for a in q.exponents]
    current = [list(range(p)) for _ in steps]
    subsets = [obs.subset for obs in q.observables]
    total = 0
    for _ in range(order):
        for x in range(p):
            if all(current[i][x] in subsets[i] for i in range(len(steps))):
                total += 1
        current = [[s[v] for v in cur] for s, cur in zip(steps, current)]
    return float(Fraction(total, order * p))


def test_criterion_7_selfjoining_exactness():
    t0 = time.perf_counter()
    battery = selfjoining_battery(100, 20240817)
    hand_ok = True
    for i in range(100):
        sys, q = draw_selfjoining(draw_rng(20240817, i))
        exact = selfjoining_correlation(sys, q).value
        if exact != empirical_selfjoining(sys, q, sys.order):
            hand_ok = False
            break
        if exact != _hand_oracle(sys, q):
            hand_ok = False
            break
    elapsed = time.perf_counter() - t0
    ok = battery.verdict and hand_ok
    report(7, "self-joining exact == empirical == hand oracle, bit for bit",
           ok, elapsed)
    assert battery.verdict, battery.summary
    assert hand_ok


def test_criterion_8_wiener_wintner_diagnostic():
    t0 = time.perf_counter()
    result = ww_tail_diagnostic(points=20, lo_exp=4, hi_exp=13, a=1, b=2,
                                monotone_from=64)
    elapsed = time.perf_counter() - t0
    report(8, "weighted double average: geometric bound + monotone dyadic tails",
           result.verdict, elapsed)
    assert result.verdict, result.summary


def test_criterion_9_quadratic_phase_realization():
    result = quadratic_phase_check(QUAD_PHASES, 10_000, tol=1e-12)
    report(9, "degree-2 phase weight equals e(n^2 theta) for |n| <= 10^4",
           result.verdict)
    assert result.verdict, result.summary


def test_criterion_10_suite_determinism(tmp_path):
    t0 = time.perf_counter()
    identical = True
    for suite in ("inequalities", "oracles", "convergence"):
        blobs = []
        for threads in (1, 2, 8):
            out = str(tmp_path / f"{suite}_t{threads}")
            code = main(["--out", out, "--threads", str(threads), "suite", suite])
            assert code == 0, f"suite {suite} failed at {threads} threads"
            blob = {}
            for name in sorted(os.listdir(out)):
                with open(os.path.join(out, name), "rb") as fh:
                    blob[name] = fh.read()
            blobs.append(blob)
        identical = identical and blobs[0] == blobs[1] == blobs[2]
    elapsed = time.perf_counter() - t0
    report(10, "byte-identical suite outputs across 1/2/8 worker threads",
           identical, elapsed)
    assert identical
