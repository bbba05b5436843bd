"""Weight sequences b_n from concrete nil-rotations, closed under products,
shifts, conjugation and constants.

Every weight here is *basic*: it is evaluated exactly at any integer n
through a closed-form orbit, never through a uniform-limit approximation.
Quadratic phases are realized through the skew product on T^2 (whose n-th
iterate has second coordinate y + 2nx + n^2 a), two-step Heisenberg weights
through the nilmanifold translation.  The declared step class is metadata
carried along the algebra operations, not verified group theory.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .dynsys import (
    Character,
    HeisenbergTranslation,
    HeisenbergVertical,
    SkewProduct,
    frac_combo,
    samples_at_counts,
)
from .errors import ConfigError
from .windows import SequenceWindow


@dataclass(frozen=True)
class TrigPhase:
    """b_n = e(n t), a 1-step weight."""

    t: float

    def __post_init__(self):
        tv = float(self.t)
        if not 0.0 <= tv < 1.0:
            raise ConfigError(f"trig phase must lie in [0, 1), got {tv}")
        object.__setattr__(self, "t", tv)


@dataclass(frozen=True)
class PolyPhase:
    """b_n = e(n^d theta) for d in {1, 2}; d = 2 runs through the skew product."""

    theta: float
    degree: int = 2

    def __post_init__(self):
        th = float(self.theta)
        if not 0.0 <= th < 1.0:
            raise ConfigError(f"poly phase must lie in [0, 1), got {th}")
        object.__setattr__(self, "theta", th)
        if self.degree not in (1, 2):
            raise ConfigError("poly phase degree must be 1 or 2")


@dataclass(frozen=True)
class HeisenbergBasic:
    """b_n = e(z(a^n . x)) on the Heisenberg nilmanifold."""

    a: tuple
    x: tuple = (0.0, 0.0, 0.0)


@dataclass(frozen=True)
class Product:
    factors: tuple

    def __post_init__(self):
        fs = tuple(self.factors)
        if not fs:
            raise ConfigError("weight product needs at least one factor")
        object.__setattr__(self, "factors", fs)


@dataclass(frozen=True)
class Shift:
    """b'_n = b_{n+m}."""

    inner: "WeightSpec"
    m: int


@dataclass(frozen=True)
class Conjugate:
    inner: "WeightSpec"


@dataclass(frozen=True)
class Constant:
    c: complex


WeightSpec = Union[TrigPhase, PolyPhase, HeisenbergBasic, Product, Shift, Conjugate, Constant]


def weight_bound(w: WeightSpec) -> float:
    if isinstance(w, Constant):
        return abs(w.c)
    if isinstance(w, Product):
        b = 1.0
        for f in w.factors:
            b *= weight_bound(f)
        return b
    if isinstance(w, (Shift, Conjugate)):
        return weight_bound(w.inner)
    return 1.0


def step_class(w: WeightSpec) -> int:
    """Declared nilpotency step of the generating rotation."""
    if isinstance(w, (TrigPhase, Constant)):
        return 1
    if isinstance(w, PolyPhase):
        return w.degree
    if isinstance(w, HeisenbergBasic):
        return 2
    if isinstance(w, Product):
        return max(step_class(f) for f in w.factors)
    return step_class(w.inner)


def weight_values(w: WeightSpec, ns) -> np.ndarray:
    """b_n for each integer n in ns, exact per variant."""
    ns = [int(n) for n in ns]
    if isinstance(w, Constant):
        return np.full(len(ns), complex(w.c), dtype=np.complex128)
    if isinstance(w, TrigPhase):
        phases = [frac_combo([(n, w.t)]) for n in ns]
        return np.exp(2j * np.pi * np.asarray(phases))
    if isinstance(w, PolyPhase):
        if w.degree == 1:
            phases = [frac_combo([(n, w.theta)]) for n in ns]
            return np.exp(2j * np.pi * np.asarray(phases))
        sys = SkewProduct(w.theta)
        win = samples_at_counts(sys, (0.0, 0.0), Character((0, 1)), ns)
        return win.values
    if isinstance(w, HeisenbergBasic):
        sys = HeisenbergTranslation(w.a)
        win = samples_at_counts(sys, w.x, HeisenbergVertical(), ns)
        return win.values
    if isinstance(w, Product):
        out = weight_values(w.factors[0], ns)
        for f in w.factors[1:]:
            out = out * weight_values(f, ns)
        return out
    if isinstance(w, Shift):
        return weight_values(w.inner, [n + w.m for n in ns])
    return np.conj(weight_values(w.inner, ns))


def weight_at(w: WeightSpec, n: int) -> complex:
    return complex(weight_values(w, [n])[0])


def weight_window(w: WeightSpec, offset: int, N: int) -> SequenceWindow:
    """Window of b_n over [offset, offset + N)."""
    if N < 1:
        raise ConfigError("weight window length must be >= 1")
    vals = weight_values(w, range(offset, offset + N))
    return SequenceWindow(offset, vals, weight_bound(w))
