"""Self-joining correlations along linear orbit families.

Exact values exist only for periodic systems, where the Cesaro limit of a
periodic sequence is its one-period average; there the correlation is
computed in integer/rational arithmetic and rounded once.  Everything else
goes through Monte Carlo over initial points with a reported standard
error.  Sample i draws its stream from (master seed, i), so results are
reproducible and independent of how samples are scheduled.

Furstenberg systems of sequences appear only through their correlation
values (the integrals of shifted coordinate products), never as measures
on sequence space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .averaging import sup_trig
from .budget import charge
from .dynsys import (
    FinitePermutation,
    Indicator,
    Table,
    samples_at_counts,
)
from .errors import ConfigError
from .kernels import pairwise_sum
from .uniformity import REAL_SLACK, hk_seminorm_estimate
from .windows import AverageSeries, SequenceWindow, check_schedule, series_from_values


@dataclass(frozen=True)
class JoiningQuery:
    """Orbit exponents plus one observable per coordinate.

    length "exact-period" asks for the exact one-period value (finite
    systems); an integer length asks for finite-N Monte Carlo.
    """

    exponents: tuple
    observables: tuple
    length: Union[int, str] = "exact-period"

    def __post_init__(self):
        exps = tuple(int(a) for a in self.exponents)
        obs = tuple(self.observables)
        if not exps:
            raise ConfigError("joining query needs d >= 1 exponents")
        if len(obs) != len(exps):
            raise ConfigError(
                f"{len(exps)} exponents but {len(obs)} observables"
            )
        if 0 in exps or len(set(exps)) != len(exps):
            raise ConfigError("joining exponents must be pairwise distinct and nonzero")
        object.__setattr__(self, "exponents", exps)
        object.__setattr__(self, "observables", obs)

    @property
    def d(self) -> int:
        return len(self.exponents)


@dataclass(frozen=True)
class JoiningCorrelation:
    value: float
    mode: str  # "exact" or "mc"
    stderr: float = None
    N: int = None
    samples: int = None


def _indicator_sets(q: JoiningQuery):
    sets = []
    for obs in q.observables:
        if not isinstance(obs, Indicator):
            raise ConfigError("exact self-joining mode needs indicator observables")
        sets.append(obs.subset)
    return sets


def _exact_fraction(sys: FinitePermutation, q: JoiningQuery) -> Fraction:
    # Per start point, the joint indicator of n -> (T^(a_i n) x in A_i) is
    # periodic with period dividing the cycle length, so the one-period
    # average splits into per-point averages over those shorter periods.
    sets = _indicator_sets(q)
    p = sys.size
    total = Fraction(0)
    for cyc in sys.cycles:
        c = len(cyc)
        t = 1
        for a in q.exponents:
            t = math.lcm(t, c // math.gcd(c, abs(a) % c or c))
        for pos in range(c):
            matches = 0
            for n in range(t):
                ok = True
                for a, subset in zip(q.exponents, sets):
                    if cyc[(pos + a * n) % c] not in subset:
                        ok = False
                        break
                if ok:
                    matches += 1
            total += Fraction(matches, t * p)
    return total


def empirical_selfjoining(sys: FinitePermutation, q: JoiningQuery, N: int) -> float:
    """Finite-N Cesaro value (1/N) sum_n mu(in all T^(-a_i n) A_i), by full
    enumeration with integer counting and a single rounding at the end."""
    if not isinstance(sys, FinitePermutation):
        raise ConfigError("empirical self-joining needs a finite system")
    sets = _indicator_sets(q)
    N = int(N)
    if N < 1:
        raise ConfigError("empirical self-joining needs N >= 1")
    p = sys.size
    charge(N * p * q.d, None, f"empirical self-joining N={N}")
    members = []
    steps = []
    for a, subset in zip(q.exponents, sets):
        flags = np.zeros(p, dtype=bool)
        for s in subset:
            flags[s] = True
        members.append(flags)
        steps.append(np.array([_perm_power(sys, x, a) for x in range(p)], dtype=np.intp))
    current = [np.arange(p, dtype=np.intp) for _ in steps]
    total = 0
    for _ in range(N):
        joint = members[0][current[0]]
        for flags, cur in zip(members[1:], current[1:]):
            joint &= flags[cur]
        total += int(joint.sum())
        current = [step[cur] for step, cur in zip(steps, current)]
    return float(Fraction(total, N * p))


def _perm_power(sys: FinitePermutation, x: int, n: int) -> int:
    cyc = sys.cycles[sys._cycle_of[x]]
    return cyc[(sys._pos_of[x] + n) % len(cyc)]


def _sample_state(sys, rng):
    if isinstance(sys, FinitePermutation):
        return int(rng.integers(sys.size))
    return tuple(float(v) for v in rng.random(sys.dim))


def selfjoining_correlation(sys, q: JoiningQuery, samples: int = 4096,
                            seed: int = None, budget=None) -> JoiningCorrelation:
    """Correlation of the self-joining along (a_1 n, ..., a_d n).

    Exact mode (q.length == "exact-period", finite systems, indicator
    observables) returns the one-period average exactly.  Monte Carlo mode
    averages (1/N) sum_n prod_i f_i(T^(a_i n) x) over `samples` initial
    points; the observables must be real-valued.
    """
    if q.length == "exact-period":
        if not isinstance(sys, FinitePermutation):
            raise ConfigError("exact-period mode needs a finite system")
        return JoiningCorrelation(value=float(_exact_fraction(sys, q)), mode="exact")
    N = int(q.length)
    if N < 1:
        raise ConfigError("Monte Carlo length must be >= 1")
    if samples < 2:
        raise ConfigError("Monte Carlo needs at least 2 samples")
    if seed is None:
        raise ConfigError("Monte Carlo mode needs a seed")
    charge(samples * N * q.d, budget, f"Monte Carlo self-joining N={N} samples={samples}")
    vals = np.empty(samples, dtype=np.float64)
    for i in range(samples):
        rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(i,)))
        x = _sample_state(sys, rng)
        prod = np.ones(N, dtype=np.complex128)
        for a, obs in zip(q.exponents, q.observables):
            win = samples_at_counts(sys, x, obs, [a * n for n in range(N)])
            prod *= win.values
        if float(np.max(np.abs(prod.imag))) > REAL_SLACK:
            raise ConfigError("Monte Carlo self-joining needs real-valued observables")
        vals[i] = (pairwise_sum(prod) / N).real
    value = float(pairwise_sum(vals) / samples)
    spread = float(np.std(vals, ddof=1)) / math.sqrt(samples)
    return JoiningCorrelation(value=value, mode="mc", stderr=spread, N=N, samples=samples)


# ---------------------------------------------------------------------------
# correlations of explicit sequences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SequenceCorrelationReport:
    shifts: tuple
    series: AverageSeries

    @property
    def value(self) -> complex:
        return self.series.final

    @property
    def n_used(self) -> int:
        return self.series.schedule[-1]


def sequence_correlation(z: SequenceWindow, shifts, schedule) -> SequenceCorrelationReport:
    """(1/N) sum_{n=1}^N prod_j z_(n + n_j) along the schedule."""
    shifts = tuple(int(v) for v in shifts)
    if not shifts:
        raise ConfigError("sequence correlation needs at least one shift")
    sched = check_schedule(schedule)
    max_n = sched[-1]
    lo = 1 + min(shifts)
    hi = max_n + max(shifts)
    z.require(lo, hi, "sequence correlation")
    prod = np.ones(max_n, dtype=np.complex128)
    for nj in shifts:
        prod *= z.segment(1 + nj, max_n)
    return SequenceCorrelationReport(shifts=shifts, series=series_from_values(prod, sched))


# ---------------------------------------------------------------------------
# finite-scale diagnostic for the joint sup-norm estimate
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MultivariableEstimateReport:
    """Finite surrogate of both sides of the joining sup-norm estimate.

    The left side averages raw grid maxima (a lower bound on each sup), so
    the reported ratio underestimates the true ratio; the implicit constant
    of the estimate keeps this a diagnostic, not a verdict.
    """

    lhs_surrogate: float
    min_seminorm: float
    ratio: float
    N: int
    samples: int
    stderr: float
    d: int


def multivariable_estimate_report(sys, observables, exponents, N: int, samples: int,
                                  oversample: int = 8, seed: int = None,
                                  budget=None) -> MultivariableEstimateReport:
    """Average over joining-distributed tuples of the sup over t of
    |(1/N) sum_{n=1}^N e(n t) prod_i f_i(T^(a_i n) x_i)|, against the
    smallest seminorm estimate of the f_i at order (d+3).

    Needs a periodic system: the joining is sampled exactly by enumerating
    the closure of the diagonal orbit, {(T^(a_1 m) x, ..., T^(a_d m) x)}.
    When p * period exceeds `samples` a seeded subsample is used and a
    standard error is reported.
    """
    if not isinstance(sys, FinitePermutation):
        raise ConfigError("joint estimate diagnostic needs a periodic (finite) system")
    q = JoiningQuery(tuple(exponents), tuple(observables), length="exact-period")
    N = int(N)
    order = sys.order
    if N < 1 or N % order != 0:
        raise ConfigError(f"N must be a positive multiple of the period {order}")
    for j, obs in enumerate(q.observables, start=1):
        if not isinstance(obs, (Indicator, Table)):
            raise ConfigError("joint estimate diagnostic needs finite-system observables")
        if obs.sup_bound > 1.0 + REAL_SLACK:
            raise ConfigError(f"observable {j} bound {obs.sup_bound} exceeds 1")
    p = sys.size
    full = p * order
    if samples >= full:
        tuples = [(x, m) for x in range(p) for m in range(order)]
        subsampled = False
    else:
        if seed is None:
            raise ConfigError("subsampled joint estimate needs a seed")
        tuples = []
        for i in range(samples):
            rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(i,)))
            tuples.append((int(rng.integers(p)), int(rng.integers(order))))
        subsampled = True
    charge(len(tuples) * q.d * N * (oversample + 1), budget, "joint estimate diagnostic")
    sups = np.empty(len(tuples), dtype=np.float64)
    for t, (x, m) in enumerate(tuples):
        prod = np.ones(N, dtype=np.complex128)
        for a, obs in zip(q.exponents, q.observables):
            xi = _perm_power(sys, x, a * m)
            win = samples_at_counts(sys, xi, obs, [a * n for n in range(1, N + 1)])
            prod *= win.values
        sup = sup_trig(SequenceWindow(0, prod, 1.0), oversample, normalizer=N)
        sups[t] = sup.grid_max
    lhs = float(pairwise_sum(sups) / len(sups))
    stderr = (
        float(np.std(sups, ddof=1)) / math.sqrt(len(sups)) if subsampled else 0.0
    )
    order_k = q.d + 3
    seminorms = [
        hk_seminorm_estimate(sys, "integrate", obs, order_k, order, order, budget=budget)
        for obs in q.observables
    ]
    min_seminorm = min(seminorms)
    if min_seminorm == 0.0:
        ratio = 0.0 if lhs == 0.0 else float("inf")
    else:
        ratio = lhs / min_seminorm
    return MultivariableEstimateReport(
        lhs_surrogate=lhs,
        min_seminorm=min_seminorm,
        ratio=ratio,
        N=N,
        samples=len(tuples),
        stderr=stderr,
        d=q.d,
    )
