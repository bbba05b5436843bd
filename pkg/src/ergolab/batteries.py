"""Seeded check batteries shared by the CLI kinds, the suites and the tests.

Draw i of a battery derives its generator from (seed, i), so batteries are
reproducible and order-independent.  Each battery returns per-draw rows
(for CSV), a verdict, and a summary dict (for JSON).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .averaging import REL_TOL, multilinear_average, van_der_corput_check
from .dynsys import (
    Character,
    FinitePermutation,
    HeisenbergTranslation,
    Indicator,
    Table,
    TorusRotation,
    iterate,
)
from .joinings import JoiningQuery, empirical_selfjoining, selfjoining_correlation
from .nilseq import PolyPhase, TrigPhase, weight_values
from .uniformity import (
    CubeSpec,
    assani_check,
    cubic_estimate_check,
    fourier_u2_power,
    gowers_norm_cyclic,
    hk_seminorm_estimate,
)
from .windows import SequenceWindow, dyadic_schedule

ALPHA_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def draw_rng(seed: int, i: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(i,)))


@dataclass
class BatteryResult:
    header: list
    rows: list
    verdict: bool
    summary: dict
    extras: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# random-window inequality batteries
# ---------------------------------------------------------------------------

def draw_vdc(rng: np.random.Generator, max_n: int):
    N = int(rng.integers(1, max_n + 1))
    H = int(rng.integers(1, N + 1))
    L = N + H - 1
    values = rng.random(L) * np.exp(2j * np.pi * rng.random(L))
    return SequenceWindow(1, values, 1.0), N, H


def vdc_battery(draws: int, max_n: int, seed: int) -> BatteryResult:
    rows = []
    failures = 0
    for i in range(draws):
        win, N, H = draw_vdc(draw_rng(seed, i), max_n)
        rep = van_der_corput_check(win, N, H)
        failures += not rep.holds
        rows.append((i, N, H, rep.lhs, rep.rhs, rep.holds))
    return BatteryResult(
        header=["draw", "N", "H", "lhs", "rhs", "holds"],
        rows=rows,
        verdict=failures == 0,
        summary={"draws": draws, "failures": failures, "max_n": max_n, "seed": seed,
                 "rel_tol": REL_TOL, "abs_tol": 1e-12},
    )


def draw_assani(rng: np.random.Generator, max_n: int):
    N = int(rng.integers(1, max_n + 1))
    a = SequenceWindow(0, rng.uniform(-1.0, 1.0, N), 1.0)
    b = SequenceWindow(0, rng.uniform(-1.0, 1.0, N), 1.0)
    c = SequenceWindow(0, rng.uniform(-1.0, 1.0, 2 * N - 1), 1.0)
    return N, a, b, c


def assani_battery(draws: int, max_n: int, seed: int, oversample: int = 8) -> BatteryResult:
    rows = []
    failures = 0
    for i in range(draws):
        N, a, b, c = draw_assani(draw_rng(seed, i), max_n)
        rep = assani_check(N, a, b, c, oversample)
        failures += not rep.holds
        rows.append((i, N, rep.lhs_sq, rep.mid_sq, rep.rhs_sup_sq, rep.holds))
    return BatteryResult(
        header=["draw", "N", "lhs_sq", "mid_sq", "rhs_sup_sq", "holds"],
        rows=rows,
        verdict=failures == 0,
        summary={"draws": draws, "failures": failures, "max_n": max_n, "seed": seed,
                 "rel_tol": REL_TOL, "abs_tol": 1e-12},
    )


def draw_cubic(rng: np.random.Generator, k: int, max_n: int):
    N = int(rng.integers(2, max_n + 1))
    length = k * (N - 1) + 1
    windows = [
        SequenceWindow(0, rng.uniform(-1.0, 1.0, length), 1.0)
        for _ in range(2**k - 1)
    ]
    return N, windows


def cubic_battery(k: int, draws: int, max_n: int, seed: int, oversample: int = 8,
                  budget=None) -> BatteryResult:
    spec = CubeSpec(k)
    rows = []
    failures = 0
    for i in range(draws):
        N, windows = draw_cubic(draw_rng(seed, i), k, max_n)
        rep = cubic_estimate_check(spec, N, windows, oversample, budget=budget)
        failures += not rep.holds
        rows.append((i, N, rep.lhs_sq, rep.rhs, rep.holds))
    return BatteryResult(
        header=["draw", "N", "lhs_sq", "rhs", "holds"],
        rows=rows,
        verdict=failures == 0,
        summary={"draws": draws, "failures": failures, "k": k, "max_n": max_n, "seed": seed,
                 "rel_tol": REL_TOL, "abs_tol": 1e-12, "budget": budget},
    )


# ---------------------------------------------------------------------------
# cyclic-norm oracle batteries
# ---------------------------------------------------------------------------

def gowers_test_functions(p: int, count: int, seed: int):
    """count functions on Z_p: constants, characters, then seeded random."""
    out = [np.ones(p, dtype=np.complex128),
           np.exp(2j * np.pi * np.arange(p) / p)]
    for i in range(count - len(out)):
        rng = draw_rng(seed, p * 1000 + i)
        f = rng.random(p) * np.exp(2j * np.pi * rng.random(p))
        out.append(f.astype(np.complex128))
    return out[:count]


def gowers_battery(ps, count_per_p: int, k_max: int, seed: int, tol: float = 1e-9,
                   budget=None) -> BatteryResult:
    rows = []
    mono_failures = 0
    fourier_failures = 0
    fid = 0
    for p in ps:
        for f in gowers_test_functions(p, count_per_p, seed):
            norms = [gowers_norm_cyclic(f, k, budget=budget) for k in range(1, k_max + 2)]
            mono_ok = all(norms[j] <= norms[j + 1] + tol for j in range(k_max))
            fourier_err = abs(norms[1] ** 4 - fourier_u2_power(f))
            fourier_ok = fourier_err <= tol
            mono_failures += not mono_ok
            fourier_failures += not fourier_ok
            rows.append((fid, p, *norms, mono_ok, fourier_err, fourier_ok))
            fid += 1
    return BatteryResult(
        header=["fid", "p"] + [f"u{k}" for k in range(1, k_max + 2)]
        + ["monotone_ok", "fourier_err", "fourier_ok"],
        rows=rows,
        verdict=mono_failures == 0 and fourier_failures == 0,
        summary={
            "functions": fid,
            "mono_failures": mono_failures,
            "fourier_failures": fourier_failures,
            "seed": seed,
        },
    )


def random_cycle(rng: np.random.Generator, p: int) -> FinitePermutation:
    """A single p-cycle in random order."""
    order = [int(v) for v in rng.permutation(p)]
    table = [0] * p
    for j, s in enumerate(order):
        table[s] = order[(j + 1) % p]
    return FinitePermutation(table)


def hk_oracle_battery(count: int, seed: int, p_max: int = 13, k_max: int = 3,
                      tol: float = 1e-9) -> BatteryResult:
    """Recursive orbit estimator against the cyclic norm of the orbit table.

    On a p-cycle with H = N = p, the estimator's shift averages see exactly
    one period, so it must reproduce the cyclic norm.
    """
    rows = []
    failures = 0
    for i in range(count):
        rng = draw_rng(seed, i)
        p = int(rng.integers(2, p_max + 1))
        sys = random_cycle(rng, p)
        f = Table(rng.uniform(-1.0, 1.0, p))
        k = 1 + i % k_max
        x = 0
        est = hk_seminorm_estimate(sys, x, f, k, p, p)
        orbit = np.array([f.values[iterate(sys, x, n)] for n in range(p)])
        oracle = gowers_norm_cyclic(orbit, k)
        est_int = hk_seminorm_estimate(sys, "integrate", f, k, p, p)
        err = abs(est - oracle)
        err_int = abs(est_int - oracle)
        ok = err <= tol and err_int <= tol
        failures += not ok
        rows.append((i, p, k, est, oracle, err, err_int, ok))
    return BatteryResult(
        header=["draw", "p", "k", "estimate", "cyclic_oracle", "err", "err_integrate", "ok"],
        rows=rows,
        verdict=failures == 0,
        summary={"count": count, "failures": failures, "seed": seed},
    )


# ---------------------------------------------------------------------------
# self-joining exactness battery
# ---------------------------------------------------------------------------

def draw_selfjoining(rng: np.random.Generator, p_max: int = 64, order_cap: int = 720):
    """Random permutation system (order capped for enumerability) and query."""
    p = int(rng.integers(2, p_max + 1))
    while True:
        sys = FinitePermutation([int(v) for v in rng.permutation(p)])
        if sys.order <= order_cap:
            break
    d = int(rng.integers(1, 4))
    pool = [a for a in range(-6, 7) if a != 0]
    exps = tuple(int(v) for v in rng.choice(pool, size=d, replace=False))
    sets = tuple(
        Indicator({s for s in range(p) if rng.random() < 0.4}) for _ in range(d)
    )
    return sys, JoiningQuery(exps, sets)


def selfjoining_battery(count: int, seed: int, mc_every: int = 25) -> BatteryResult:
    """Exact one-period value vs the finite-N enumeration at N = period
    (must agree bit for bit) with periodic Monte Carlo coupling checks."""
    rows = []
    failures = 0
    for i in range(count):
        rng = draw_rng(seed, i)
        sys, q = draw_selfjoining(rng)
        exact = selfjoining_correlation(sys, q).value
        emp = empirical_selfjoining(sys, q, sys.order)
        bit_equal = exact == emp
        mc_ok = True
        if i % mc_every == 0:
            mc_q = JoiningQuery(q.exponents, q.observables, length=64)
            mc = selfjoining_correlation(sys, mc_q, samples=800, seed=seed * 7 + i)
            # finite-N Monte Carlo estimates the N=64 Cesaro value; compare
            # against its enumeration, not the period limit
            target = empirical_selfjoining(sys, q, 64)
            mc_ok = abs(mc.value - target) <= 3.0 * mc.stderr + 1e-12
        ok = bit_equal and mc_ok
        failures += not ok
        rows.append((i, sys.size, sys.order, q.d, exact, emp, bit_equal, mc_ok))
    return BatteryResult(
        header=["draw", "p", "order", "d", "exact", "empirical", "bit_equal", "mc_ok"],
        rows=rows,
        verdict=failures == 0,
        summary={"count": count, "failures": failures, "seed": seed},
    )


# ---------------------------------------------------------------------------
# realization checks
# ---------------------------------------------------------------------------

def _exact_frac_fraction(q: Fraction) -> float:
    return float(q - (q.numerator // q.denominator))


def quadratic_phase_check(thetas, n_max: int, tol: float = 1e-12) -> BatteryResult:
    """weight value of the degree-2 phase vs e(n^2 theta) reduced exactly."""
    rows = []
    worst = 0.0
    for theta in thetas:
        ns = list(range(-n_max, n_max + 1))
        got = weight_values(PolyPhase(theta, 2), ns)
        th = Fraction(*float(theta).as_integer_ratio())
        phases = np.array([_exact_frac_fraction(n * n * th) for n in ns])
        want = np.exp(2j * np.pi * phases)
        err = float(np.max(np.abs(got - want)))
        worst = max(worst, err)
        rows.append((repr(float(theta)), n_max, err, err <= tol))
    return BatteryResult(
        header=["theta", "n_max", "max_err", "ok"],
        rows=rows,
        verdict=worst <= tol,
        summary={"worst_err": worst, "n_max": n_max, "tolerance": tol},
    )


def _heis_matrix_oracle(a, x, n: int):
    """a^n . x by n-fold exact-rational 3x3 matrix products, then reduction."""

    def mat(g):
        return [
            [Fraction(1), Fraction(*float(g[0]).as_integer_ratio()), Fraction(*float(g[2]).as_integer_ratio())],
            [Fraction(0), Fraction(1), Fraction(*float(g[1]).as_integer_ratio())],
            [Fraction(0), Fraction(0), Fraction(1)],
        ]

    def mul(A, B):
        return [
            [sum(A[i][k] * B[k][j] for k in range(3)) for j in range(3)]
            for i in range(3)
        ]

    M = mat((0.0, 0.0, 0.0))
    A = mat(a)
    for _ in range(n):
        M = mul(M, A)
    M = mul(M, mat(x))
    xr, yr, zr = M[0][1], M[1][2], M[0][2]
    zr = zr - xr * (yr.numerator // yr.denominator)
    return tuple(_exact_frac_fraction(v) for v in (xr, yr, zr))


def heisenberg_matrix_battery(count: int, seed: int, n_max: int = 64,
                              tol: float = 1e-12) -> BatteryResult:
    rows = []
    worst = 0.0
    for i in range(count):
        rng = draw_rng(seed, i)
        a = tuple(float(v) for v in rng.random(3))
        x = tuple(float(v) for v in rng.random(3))
        sys = HeisenbergTranslation(a)
        err = 0.0
        for n in range(n_max + 1):
            got = iterate(sys, x, n)
            want = _heis_matrix_oracle(a, x, n)
            err = max(err, max(abs(g - w) for g, w in zip(got, want)))
        worst = max(worst, err)
        rows.append((i, n_max, err, err <= tol))
    return BatteryResult(
        header=["draw", "n_max", "max_err", "ok"],
        rows=rows,
        verdict=worst <= tol,
        summary={"count": count, "worst_err": worst, "seed": seed},
    )


# ---------------------------------------------------------------------------
# convergence diagnostics
# ---------------------------------------------------------------------------

def designed_phase_grid(points: int, drift: float):
    """Grid of weight phases t with s = t + drift of the form (k + 1/3)/64.

    The doubling orbit of 1/3 is {1/3, 2/3}, so cos(2 pi 2^j s) = -1/2 for
    every j >= 6 and the dyadic Cauchy tails of the geometric sum contract
    by exactly 1/2 per step beyond N = 64; the grid also stays clear of the
    resonance s = 0.
    """
    ts = []
    for i in range(points):
        k = 1 + 3 * i
        s = (k + 1.0 / 3.0) / 64.0
        ts.append((s - drift) % 1.0)
    return ts


@dataclass
class TailCase:
    label: str
    series_rows: list  # (t, N, re, im, tail, bound)
    verdict: bool


def ww_tail_diagnostic(points: int = 20, lo_exp: int = 4, hi_exp: int = 13,
                       a: int = 1, b: int = 2, monotone_from: int = 64,
                       tol: float = 1e-9) -> BatteryResult:
    """Weighted double character average on the golden rotation.

    For each designed t, |A_N| must obey the geometric-sum bound
    2 / (N |1 - e(t + (a+b) alpha)|) and the dyadic Cauchy tails must be
    nonincreasing from N = monotone_from on.
    """
    alpha = ALPHA_GOLDEN
    drift = ((a + b) * alpha) % 1.0
    sched = dyadic_schedule(lo_exp, hi_exp)
    sys = TorusRotation((alpha,))
    rows = []
    verdict = True
    for t in designed_phase_grid(points, drift):
        series = multilinear_average(
            sys, (0.0,), [Character(1), Character(1)], [a, b], TrigPhase(t), sched
        )
        s = (t + (a + b) * alpha) % 1.0
        gap = abs(1.0 - np.exp(2j * np.pi * s))
        bounds = [2.0 / (N * gap) + tol for N in sched]
        bound_ok = all(
            abs(series.averages[j]) <= bounds[j] for j in range(len(sched))
        )
        tails = series.cauchy_tail
        mono_ok = all(
            tails[j + 1] <= tails[j] * (1.0 + REL_TOL) + 1e-12
            for j in range(len(tails) - 1)
            if sched[j] >= monotone_from
        )
        verdict = verdict and bound_ok and mono_ok
        for j, N in enumerate(sched):
            tail = tails[j - 1] if j > 0 else None
            rows.append((
                repr(t), N, series.averages[j].real, series.averages[j].imag,
                tail, bounds[j], bound_ok and mono_ok,
            ))
    return BatteryResult(
        header=["t", "N", "re", "im", "cauchy_tail", "bound", "ok"],
        rows=rows,
        verdict=verdict,
        summary={"points": points, "a": a, "b": b, "alpha": repr(alpha),
                 "schedule": sched, "monotone_from": monotone_from},
    )


def character_tail_diagnostic(points: int = 5, lo_exp: int = 4, hi_exp: int = 13,
                              a: int = 1, monotone_from: int = 64) -> BatteryResult:
    """Single-character version of the weighted tail diagnostic."""
    alpha = ALPHA_GOLDEN
    drift = (a * alpha) % 1.0
    sched = dyadic_schedule(lo_exp, hi_exp)
    sys = TorusRotation((alpha,))
    rows = []
    verdict = True
    for t in designed_phase_grid(points, drift):
        series = multilinear_average(sys, (0.0,), [Character(1)], [a], TrigPhase(t), sched)
        tails = series.cauchy_tail
        mono_ok = all(
            tails[j + 1] <= tails[j] * (1.0 + REL_TOL) + 1e-12
            for j in range(len(tails) - 1)
            if sched[j] >= monotone_from
        )
        verdict = verdict and mono_ok
        for j, N in enumerate(sched):
            rows.append((
                repr(t), N, series.averages[j].real, series.averages[j].imag,
                tails[j - 1] if j > 0 else None, mono_ok,
            ))
    return BatteryResult(
        header=["t", "N", "re", "im", "cauchy_tail", "ok"],
        rows=rows,
        verdict=verdict,
        summary={"points": points, "a": a, "alpha": repr(alpha), "schedule": sched},
    )


def periodic_tail_diagnostic(seed: int = 7005, lo_exp: int = 2, hi_exp: int = 12) -> BatteryResult:
    """Averages over a 4-cycle at power-of-two N: exactly constant, tails 0.

    Table values are dyadic rationals, so every pairwise sum is exact and
    the stabilization is bit-level, not approximate.
    """
    rng = draw_rng(seed, 0)
    levels = np.array([-1.0, -0.5, 0.0, 0.5, 1.0])
    table = Table(levels[rng.integers(0, 5, size=4)])
    sys = FinitePermutation([1, 2, 3, 0])
    sched = dyadic_schedule(lo_exp, hi_exp)
    series = multilinear_average(sys, 0, [table], [1], None, sched)
    constant = all(series.averages[j] == series.averages[0] for j in range(len(sched)))
    zero_tails = all(t == 0.0 for t in series.cauchy_tail)
    rows = [
        (N, series.averages[j].real, series.averages[j].imag,
         series.cauchy_tail[j - 1] if j > 0 else None)
        for j, N in enumerate(sched)
    ]
    return BatteryResult(
        header=["N", "re", "im", "cauchy_tail"],
        rows=rows,
        verdict=constant and zero_tails,
        summary={"period": 4, "constant": constant, "zero_tails": zero_tails,
                 "schedule": sched, "seed": seed},
    )
