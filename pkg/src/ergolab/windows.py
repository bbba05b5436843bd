"""Finite windows of bounded two-sided sequences and averaged series."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, WindowError
from .kernels import prefix_pairwise_means

BOUND_SLACK = 1e-12


@dataclass(frozen=True)
class SequenceWindow:
    """Values of a bounded sequence on [offset, offset + len(values)).

    The declared bound is a promise about the whole two-sided sequence, so
    every stored value must satisfy |v| <= bound + 1e-12.
    """

    offset: int
    values: np.ndarray
    bound: float

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.complex128)
        object.__setattr__(self, "values", vals)
        if vals.ndim != 1 or vals.size < 1:
            raise ConfigError("window values must be a nonempty 1-d array")
        if self.bound < 0:
            raise ConfigError("window bound must be nonnegative")
        peak = float(np.max(np.abs(vals)))
        if peak > self.bound + BOUND_SLACK:
            raise ConfigError(
                f"window value modulus {peak} exceeds declared bound {self.bound}"
            )

    def __len__(self) -> int:
        return len(self.values)

    @property
    def end(self) -> int:
        """One past the last covered index."""
        return self.offset + len(self.values)

    def covers(self, lo: int, hi: int) -> bool:
        """Whether indices lo..hi (inclusive) all lie in the window."""
        return self.offset <= lo and hi < self.end

    def require(self, lo: int, hi: int, what: str = "operation") -> None:
        if not self.covers(lo, hi):
            raise WindowError(
                f"{what} needs indices [{lo}, {hi}] but window covers "
                f"[{self.offset}, {self.end - 1}]"
            )

    def value_at(self, n: int) -> complex:
        self.require(n, n, "value_at")
        return complex(self.values[n - self.offset])

    def segment(self, lo: int, length: int) -> np.ndarray:
        """Contiguous values for indices lo..lo+length-1 (view, do not mutate)."""
        self.require(lo, lo + length - 1, "segment")
        i = lo - self.offset
        return self.values[i : i + length]

    def rebased(self, lo: int) -> np.ndarray:
        """All values from index lo onward, for kernels indexing from 0."""
        self.require(lo, lo, "rebase")
        return self.values[lo - self.offset :]


def constant_window(value: complex, offset: int, length: int) -> SequenceWindow:
    vals = np.full(length, complex(value), dtype=np.complex128)
    return SequenceWindow(offset, vals, abs(value))


def check_schedule(schedule) -> list[int]:
    sched = [int(n) for n in schedule]
    if not sched:
        raise ConfigError("schedule must be nonempty")
    if sched[0] < 1 or any(b <= a for a, b in zip(sched, sched[1:])):
        raise ConfigError("schedule must be strictly increasing and start at N >= 1")
    return sched


@dataclass(frozen=True)
class AverageSeries:
    """Averages A_N on an increasing schedule plus Cauchy-tail diagnostics."""

    schedule: list[int]
    averages: np.ndarray
    cauchy_tail: np.ndarray = field(init=False)

    def __post_init__(self):
        sched = check_schedule(self.schedule)
        object.__setattr__(self, "schedule", sched)
        avg = np.asarray(self.averages, dtype=np.complex128)
        object.__setattr__(self, "averages", avg)
        if len(avg) != len(sched):
            raise ConfigError("averages and schedule must align")
        tails = np.abs(np.diff(avg))
        object.__setattr__(self, "cauchy_tail", tails)

    @property
    def final(self) -> complex:
        return complex(self.averages[-1])


def series_from_values(values: np.ndarray, schedule) -> AverageSeries:
    """A_N = pairwise mean of values[:N] for each scheduled N.

    values[n] must hold the n-th summand (index 0 first); coverage of the
    whole schedule is the caller's responsibility.
    """
    sched = check_schedule(schedule)
    if len(values) < sched[-1]:
        raise WindowError(
            f"need {sched[-1]} summands for the schedule, have {len(values)}"
        )
    return AverageSeries(sched, prefix_pairwise_means(np.asarray(values, np.complex128), sched))


def dyadic_schedule(lo_exp: int, hi_exp: int) -> list[int]:
    """Powers of two 2^lo_exp .. 2^hi_exp inclusive."""
    return [2**j for j in range(lo_exp, hi_exp + 1)]


def period_schedule(period: int, count: int) -> list[int]:
    """First `count` positive multiples of a period."""
    return [period * j for j in range(1, count + 1)]


def default_schedule(period=None, hi_exp: int = 12) -> list[int]:
    """Dyadic scales plus early period multiples (the standard diagnostic
    schedule: dyadic tails for convergence, period multiples for exact
    limits on periodic systems)."""
    points = set(dyadic_schedule(0, hi_exp))
    if period:
        points.update(p for p in period_schedule(period, 16) if p <= 2**hi_exp)
        points.add(period)
    return sorted(points)
