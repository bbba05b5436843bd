"""Concrete measure-preserving systems with exact closed-form iterates.

Four system variants: permutations of a finite set (uniform measure),
torus rotations, the affine skew product (x, y) -> (x + a, y + 2x + a) on
T^2, and translations on the 3-dimensional Heisenberg nilmanifold (Haar
measure).  Iterates are evaluated in closed form, never by n-fold
composition, so T^k x costs O(1) for any k a 64-bit-safe integer.

Torus coordinates are doubles, i.e. exact dyadic rationals.  All mod-1
reductions run in exact integer arithmetic over those rationals and round
once on output, so an iterate that lands on an exact integer reduces to
exactly 0.0 and orbits never drift.

All shipped variants have zero entropy by construction (permutations are
periodic, the others are distal group extensions); nothing checks entropy
at runtime.  Rational rotation vectors are allowed and give periodic,
non-ergodic systems; callers must not assume ergodicity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import ConfigError, ExactRangeError
from .windows import SequenceWindow

INT64_MAX = 2**63 - 1

State = Union[int, tuple]


def _check_count(k: int) -> int:
    k = int(k)
    if abs(k) > INT64_MAX:
        raise ExactRangeError(f"iterate count {k} outside the 64-bit-safe range")
    return k


def _check_unit(value: float, what: str) -> float:
    v = float(value)
    if not 0.0 <= v < 1.0:
        raise ConfigError(f"{what} must lie in [0, 1), got {v}")
    return v


# ---------------------------------------------------------------------------
# exact dyadic-rational accumulator (doubles are rationals num / 2^e)
# ---------------------------------------------------------------------------

def _ratio(v: float):
    nv, dv = float(v).as_integer_ratio()
    return nv, dv.bit_length() - 1


class _Dyadic:
    """Exact accumulator for integer combinations of dyadic rationals."""

    __slots__ = ("num", "e")

    def __init__(self):
        self.num = 0
        self.e = 0

    def _align(self, e: int) -> None:
        if e > self.e:
            self.num <<= e - self.e
            self.e = e

    def add(self, c: int, v: float) -> "_Dyadic":
        nv, ev = _ratio(v)
        self._align(ev)
        self.num += c * (nv << (self.e - ev))
        return self

    def add_prod(self, c: int, v: float, w: float) -> "_Dyadic":
        nv, ev = _ratio(v)
        nw, ew = _ratio(w)
        self._align(ev + ew)
        self.num += c * ((nv * nw) << (self.e - ev - ew))
        return self

    def add_acc(self, c: int, other: "_Dyadic") -> "_Dyadic":
        self._align(other.e)
        self.num += c * (other.num << (self.e - other.e))
        return self

    def floor(self) -> int:
        return self.num >> self.e

    def frac(self) -> float:
        den = 1 << self.e
        return (self.num % den) / den


def frac_combo(terms) -> float:
    """Exact fractional part of sum of c * v over (int c, float v) pairs."""
    acc = _Dyadic()
    for c, v in terms:
        acc.add(int(c), float(v))
    return acc.frac()


# ---------------------------------------------------------------------------
# system variants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FinitePermutation:
    """Bijection of {0, ..., p-1} with uniform invariant measure."""

    table: tuple

    def __post_init__(self):
        tab = tuple(int(v) for v in self.table)
        object.__setattr__(self, "table", tab)
        p = len(tab)
        if p < 1 or sorted(tab) != list(range(p)):
            raise ConfigError("permutation table must be a bijection on {0..p-1}")
        seen = [False] * p
        cycles = []
        for start in range(p):
            if seen[start]:
                continue
            cyc = []
            j = start
            while not seen[j]:
                seen[j] = True
                cyc.append(j)
                j = tab[j]
            cycles.append(tuple(cyc))
        object.__setattr__(self, "cycles", tuple(cycles))
        which = [0] * p
        pos = [0] * p
        for ci, cyc in enumerate(cycles):
            for pi, s in enumerate(cyc):
                which[s] = ci
                pos[s] = pi
        object.__setattr__(self, "_cycle_of", tuple(which))
        object.__setattr__(self, "_pos_of", tuple(pos))
        order = 1
        for cyc in cycles:
            order = math.lcm(order, len(cyc))
        object.__setattr__(self, "order", order)

    @property
    def size(self) -> int:
        return len(self.table)


@dataclass(frozen=True)
class TorusRotation:
    """x -> x + alpha on T^m."""

    alpha: tuple

    def __post_init__(self):
        a = self.alpha
        if isinstance(a, (int, float)):
            a = (a,)
        a = tuple(_check_unit(v, "rotation coordinate") for v in a)
        if not a:
            raise ConfigError("rotation vector must have dimension >= 1")
        object.__setattr__(self, "alpha", a)

    @property
    def dim(self) -> int:
        return len(self.alpha)


@dataclass(frozen=True)
class SkewProduct:
    """(x, y) -> (x + alpha, y + 2x + alpha) on T^2; n-th iterate adds n^2 alpha."""

    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", _check_unit(self.alpha, "skew alpha"))

    @property
    def dim(self) -> int:
        return 2


@dataclass(frozen=True)
class HeisenbergTranslation:
    """Left translation by a = (alpha, beta, gamma) on the Heisenberg nilmanifold.

    Group law (x,y,z)*(x',y',z') = (x+x', y+y', z+z'+x y'); the integer
    lattice acts on the right and cosets are reduced to the fundamental
    domain [0,1)^3 by the normal form x -> {x}, y -> {y}, z -> {z - x floor(y)}.
    """

    a: tuple

    def __post_init__(self):
        a = tuple(float(v) for v in self.a)
        if len(a) != 3:
            raise ConfigError("Heisenberg element needs 3 coordinates")
        object.__setattr__(self, "a", a)

    @property
    def dim(self) -> int:
        return 3


SystemSpec = Union[FinitePermutation, TorusRotation, SkewProduct, HeisenbergTranslation]


def system_period(sys: SystemSpec):
    """Exact period of T (finite systems only), else None."""
    return sys.order if isinstance(sys, FinitePermutation) else None


def check_state(sys: SystemSpec, x: State) -> State:
    if isinstance(sys, FinitePermutation):
        xi = int(x)
        if not 0 <= xi < sys.size:
            raise ConfigError(f"state {xi} outside {{0..{sys.size - 1}}}")
        return xi
    coords = (x,) if isinstance(x, (int, float)) else tuple(float(v) for v in x)
    if len(coords) != sys.dim:
        raise ConfigError(f"state has dimension {len(coords)}, system needs {sys.dim}")
    return tuple(_check_unit(v, "state coordinate") for v in coords)


def _heis_point(a: tuple, n: int, x: tuple) -> tuple:
    """Reduced coordinates of a^n . x, exact; a^n = (na, nb, ng + C(n,2) ab)."""
    al, be, ga = a
    x1, x2, x3 = x
    xa = _Dyadic().add(n, al).add(1, x1)
    ya = _Dyadic().add(n, be).add(1, x2)
    za = (
        _Dyadic()
        .add(n, ga)
        .add_prod(n * (n - 1) // 2, al, be)
        .add(1, x3)
        .add_prod(n, al, x2)
    )
    za.add_acc(-ya.floor(), xa)
    return (xa.frac(), ya.frac(), za.frac())


def iterate(sys: SystemSpec, x: State, n: int) -> State:
    """T^n x by the closed form of each variant (exact, O(1) in n)."""
    n = _check_count(n)
    x = check_state(sys, x)
    if isinstance(sys, FinitePermutation):
        cyc = sys.cycles[sys._cycle_of[x]]
        return cyc[(sys._pos_of[x] + n) % len(cyc)]
    if isinstance(sys, TorusRotation):
        return tuple(frac_combo([(1, xi), (n, ai)]) for xi, ai in zip(x, sys.alpha))
    if isinstance(sys, SkewProduct):
        x0, y0 = x
        return (
            frac_combo([(1, x0), (n, sys.alpha)]),
            frac_combo([(1, y0), (2 * n, x0), (n * n, sys.alpha)]),
        )
    return _heis_point(sys.a, n, x)


# ---------------------------------------------------------------------------
# observables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Character:
    """e(m . x) on a torus-like state space; sup bound 1."""

    m: tuple

    def __post_init__(self):
        m = (self.m,) if isinstance(self.m, int) else tuple(int(v) for v in self.m)
        object.__setattr__(self, "m", m)

    sup_bound = 1.0


@dataclass(frozen=True)
class Indicator:
    """Indicator of a subset of a finite state space; sup bound 1."""

    subset: frozenset

    def __post_init__(self):
        object.__setattr__(self, "subset", frozenset(int(v) for v in self.subset))

    sup_bound = 1.0


@dataclass(frozen=True)
class Table:
    """Explicit complex values on {0..p-1}; sup bound is the peak modulus."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.complex128)
        if vals.ndim != 1 or vals.size < 1:
            raise ConfigError("table must be a nonempty 1-d array")
        object.__setattr__(self, "values", vals)

    @property
    def sup_bound(self) -> float:
        return float(np.max(np.abs(self.values)))


@dataclass(frozen=True)
class HeisenbergVertical:
    """e(z) on reduced Heisenberg coordinates; sup bound 1."""

    sup_bound = 1.0


Observable = Union[Character, Indicator, Table, HeisenbergVertical]


def _check_observable(sys: SystemSpec, obs: Observable) -> None:
    if isinstance(obs, (Indicator, Table)):
        if not isinstance(sys, FinitePermutation):
            raise ConfigError(f"{type(obs).__name__} observable needs a finite system")
        if isinstance(obs, Table) and len(obs.values) != sys.size:
            raise ConfigError(
                f"table length {len(obs.values)} != state count {sys.size}"
            )
        if isinstance(obs, Indicator) and any(
            not 0 <= s < sys.size for s in obs.subset
        ):
            raise ConfigError("indicator subset outside the state space")
    elif isinstance(obs, Character):
        if isinstance(sys, FinitePermutation):
            raise ConfigError("character observable needs a torus-like system")
        if len(obs.m) != sys.dim:
            raise ConfigError(
                f"character frequency has dimension {len(obs.m)}, system needs {sys.dim}"
            )
    elif isinstance(obs, HeisenbergVertical):
        if not isinstance(sys, HeisenbergTranslation):
            raise ConfigError("vertical observable needs the Heisenberg system")


def evaluate_observable(sys: SystemSpec, obs: Observable, x: State) -> complex:
    _check_observable(sys, obs)
    if isinstance(obs, Indicator):
        return 1.0 + 0.0j if x in obs.subset else 0.0 + 0.0j
    if isinstance(obs, Table):
        return complex(obs.values[x])
    if isinstance(obs, Character):
        phase = sum(mj * xj for mj, xj in zip(obs.m, x))
        return complex(np.exp(2j * np.pi * phase))
    return complex(np.exp(2j * np.pi * x[2]))


def _observe_states(sys, obs, states) -> np.ndarray:
    if isinstance(obs, Table):
        return obs.values[np.asarray(states)]
    if isinstance(obs, Indicator):
        member = np.zeros(sys.size, dtype=np.complex128)
        for s in obs.subset:
            member[s] = 1.0
        return member[np.asarray(states)]
    coords = np.asarray(states, dtype=np.float64)
    if isinstance(obs, Character):
        phase = coords @ np.asarray(obs.m, dtype=np.float64)
    else:
        phase = coords[:, 2]
    return np.exp(2j * np.pi * phase)


def _states_at_counts(sys: SystemSpec, x: State, counts) -> list:
    """T^k x for each k in counts, via the closed forms."""
    if isinstance(sys, FinitePermutation):
        cyc = sys.cycles[sys._cycle_of[x]]
        L = len(cyc)
        pos = sys._pos_of[x]
        return [cyc[(pos + k) % L] for k in counts]
    if isinstance(sys, TorusRotation):
        return [
            tuple(frac_combo([(1, xi), (k, ai)]) for xi, ai in zip(x, sys.alpha))
            for k in counts
        ]
    if isinstance(sys, SkewProduct):
        x0, y0 = x
        al = sys.alpha
        return [
            (
                frac_combo([(1, x0), (k, al)]),
                frac_combo([(1, y0), (2 * k, x0), (k * k, al)]),
            )
            for k in counts
        ]
    return [_heis_point(sys.a, k, x) for k in counts]


def samples_at_counts(sys, x, obs, counts, bound=None) -> SequenceWindow:
    """Window of obs(T^k x) over the given iterate counts (index 0 first)."""
    x = check_state(sys, x)
    _check_observable(sys, obs)
    for k in counts:
        _check_count(k)
    states = _states_at_counts(sys, x, counts)
    values = _observe_states(sys, obs, states)
    return SequenceWindow(0, values, obs.sup_bound if bound is None else bound)


def orbit_samples(sys, x, obs, exponent: int, N: int) -> SequenceWindow:
    """n -> obs(T^(exponent n) x) for n in [0, N)."""
    if N < 1:
        raise ConfigError("orbit sample count must be >= 1")
    e = int(exponent)
    if abs(e) * (N - 1) > INT64_MAX:
        raise ExactRangeError("exponent * N leaves the 64-bit-safe range")
    return samples_at_counts(sys, x, obs, [e * n for n in range(N)])


@dataclass(frozen=True)
class PolynomialIterate:
    """Integer-coefficient polynomial p(n), ascending coefficients, deg >= 1."""

    coeffs: tuple

    def __post_init__(self):
        c = tuple(int(v) for v in self.coeffs)
        if len(c) < 2 or c[-1] == 0:
            raise ConfigError(
                "polynomial needs degree >= 1 (ascending coefficients, leading nonzero)"
            )
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, n: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * n + c
        return _check_count(acc)


def polynomial_orbit_samples(sys, x, obs, p: PolynomialIterate, N: int) -> SequenceWindow:
    """n -> obs(T^(p(n)) x) for n in [0, N)."""
    if N < 1:
        raise ConfigError("orbit sample count must be >= 1")
    return samples_at_counts(sys, x, obs, [p(n) for n in range(N)])
