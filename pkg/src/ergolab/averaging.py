"""Ergodic averaging engines.

Summation conventions follow the displayed formulas each operation cites:
plain and weighted averages run n = 0..N-1, the van der Corput inequality
runs n = 1..N.  All reductions use the fixed pairwise tree from kernels,
so results are independent of worker count.

Inequality verdicts use relative tolerance 1e-9 plus absolute 1e-12
(roundoff headroom for sums of up to ~1e7 double terms).  Checks that
need an upper bound on a sup over the circle use the certified value,
never the raw grid maximum.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .dynsys import orbit_samples
from .errors import ConfigError
from .nilseq import weight_window
from .windows import AverageSeries, SequenceWindow, check_schedule, series_from_values

REL_TOL = 1e-9
ABS_TOL = 1e-12


def leq_tol(lhs: float, rhs: float) -> bool:
    """lhs <= rhs up to the package-wide inequality tolerance."""
    return lhs <= rhs * (1.0 + REL_TOL) + ABS_TOL


def multilinear_average(sys, x, observables, exponents, weight, schedule) -> AverageSeries:
    """A_N = (1/N) sum_{n<N} b_n prod_j f_j(T^(a_j n) x) on the schedule.

    weight may be None for the unweighted average.  Repeated or zero
    exponents are allowed for diagnostics but warned about, since the
    averaging theory assumes distinct nonzero exponents.
    """
    observables = list(observables)
    exponents = [int(a) for a in exponents]
    if len(observables) != len(exponents):
        raise ConfigError(
            f"{len(observables)} observables but {len(exponents)} exponents"
        )
    if not observables:
        raise ConfigError("need at least one observable")
    if 0 in exponents or len(set(exponents)) != len(exponents):
        warnings.warn("exponents are not pairwise distinct nonzero integers")
    sched = check_schedule(schedule)
    max_n = sched[-1]
    values = orbit_samples(sys, x, observables[0], exponents[0], max_n).values.copy()
    for obs, a in zip(observables[1:], exponents[1:]):
        values *= orbit_samples(sys, x, obs, a, max_n).values
    if weight is not None:
        values *= weight_window(weight, 0, max_n).values
    return series_from_values(values, sched)


def weighted_average_of_window(a: SequenceWindow, b: SequenceWindow, schedule) -> AverageSeries:
    """(1/N) sum_{n=0}^{N-1} a_n b_n for each scheduled N."""
    sched = check_schedule(schedule)
    max_n = sched[-1]
    a.require(0, max_n - 1, "weighted average")
    b.require(0, max_n - 1, "weighted average")
    return series_from_values(a.segment(0, max_n) * b.segment(0, max_n), sched)


@dataclass(frozen=True)
class SupBound:
    """Grid maximum of a trig polynomial with a certified upper bound.

    certified_upper = grid_max / (1 - pi (L-1) / grid_size) dominates the
    true sup over the circle whenever grid_size > pi (L-1): between grid
    points of spacing 1/M the polynomial grows by at most
    (pi deg / M) * sup by the Bernstein derivative estimate.
    """

    grid_max: float
    certified_upper: float
    argmax_t: float
    grid_size: int


def sup_trig(c: SequenceWindow, oversample: int = 8, normalizer: float = 1.0) -> SupBound:
    """Certified sup over t of |sum_m c_m e(2 pi i m t)| / normalizer.

    The polynomial is sampled on a uniform grid of oversample * len(c)
    points via a zero-padded DFT.  The window offset only rotates the
    polynomial's phase, so moduli (and the bound) do not depend on it.
    """
    if oversample < 4:
        raise ConfigError("oversample factor must be >= 4")
    if normalizer <= 0:
        raise ConfigError("normalizer must be positive")
    L = len(c)
    M = int(oversample) * L
    slack = np.pi * (L - 1) / M
    if slack >= 1.0:
        raise ConfigError(f"grid of {M} points cannot certify degree {L - 1}")
    padded = np.zeros(M, dtype=np.complex128)
    padded[:L] = c.values
    grid = np.fft.ifft(padded) * M  # grid[j] = sum_m c_m e(+2 pi i m j / M)
    moduli = np.abs(grid)
    j = int(np.argmax(moduli))
    grid_max = float(moduli[j]) / normalizer
    return SupBound(
        grid_max=grid_max,
        certified_upper=grid_max / (1.0 - slack),
        argmax_t=j / M,
        grid_size=M,
    )


@dataclass(frozen=True)
class VdcReport:
    lhs: float
    rhs: float
    holds: bool
    N: int
    H: int


def van_der_corput_check(u: SequenceWindow, N: int, H: int) -> VdcReport:
    """Both sides of the finite van der Corput inequality, evaluated exactly.

    lhs = H^2 |sum_{n=1}^N u_n|^2
    rhs = H (N+H-1) sum_{n=1}^N |u_n|^2
          + 2 (N+H-1) sum_{h=1}^{H-1} (H-h) Re sum_{n=1}^{N-h} u_n conj(u_{n+h})

    The autocorrelation sums stop at N - h, i.e. u is extended by zero
    beyond index N as in the classical finite lemma; with the sums run to
    N over an arbitrary ambient sequence the inequality is false (random
    windows give counterexamples), so only indices 1..N are ever read.
    """
    N = int(N)
    H = int(H)
    if N < 1 or H < 1 or H > N:
        raise ConfigError(f"need 1 <= H <= N, got N={N}, H={H}")
    u.require(1, N, "van der Corput check")
    arr = np.ascontiguousarray(u.segment(1, N))
    S, Q, W = kernels.vdc_sums(arr, N, H)
    lhs = H * H * (S.real * S.real + S.imag * S.imag)
    rhs = H * (N + H - 1) * Q + 2.0 * (N + H - 1) * W
    return VdcReport(lhs=float(lhs), rhs=float(rhs), holds=leq_tol(lhs, rhs), N=N, H=H)
