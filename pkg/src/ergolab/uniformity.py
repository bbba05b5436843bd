"""Cubic averages, box norms and the finite-scale inequality checkers.

Two norm flavours live here.  The cyclic norm (gowers_norm_cyclic) is an
exact algebraic object on Z_p and serves as the oracle; the windowed local
seminorm and the recursive orbit estimator are finite surrogates of the
asymptotic objects, reported together with the (H, N) scales that produced
them.  The iterated-limit structure (N inside, H outside) is kept explicit
rather than hidden: every report carries both parameters.

Finite-scale cube averages can dip below zero before any limit is taken;
roots clamp them at zero and flag that they did.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import kernels
from .averaging import SupBound, leq_tol, sup_trig
from .budget import charge
from .dynsys import FinitePermutation, orbit_samples, samples_at_counts
from .errors import ConfigError
from .kernels import pairwise_sum
from .windows import SequenceWindow

REAL_SLACK = 1e-12


# ---------------------------------------------------------------------------
# cube combinatorics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CubeSpec:
    """Vertex bookkeeping for the k-dimensional combinatorial cube.

    Vertices are 0/1 tuples (eps_1, ..., eps_k); the index map phi sends a
    nonzero vertex to sum eps_i 2^(i-1), a bijection onto {1, ..., 2^k - 1}.
    """

    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ConfigError("cube step k must be >= 1")

    @property
    def num_star(self) -> int:
        return 2**self.k - 1

    def vertices(self):
        """V_k = {0,1}^k, zero vertex first."""
        return [self.eps_of(v) for v in range(2**self.k)]

    def star_vertices(self):
        """V_k minus the zero vertex, in phi order."""
        return [self.eps_of(v) for v in range(1, 2**self.k)]

    def eps_of(self, code: int):
        return tuple((code >> i) & 1 for i in range(self.k))

    def phi(self, eps) -> int:
        return sum(e << i for i, e in enumerate(eps))

    def face_star(self, i: int):
        """V*_{k,i} = nonzero vertices with eps_i = 0 (i is 1-based)."""
        return {eps for eps in self.star_vertices() if eps[i - 1] == 0}

    def a_set(self, i: int, j: int):
        """A_i^j = V*_{k,i} minus V*_{k,j}."""
        return self.face_star(i) - self.face_star(j)


def _require_star_windows(spec: CubeSpec, N: int, sequences):
    seqs = list(sequences)
    if len(seqs) != spec.num_star:
        raise ConfigError(f"need {spec.num_star} windows for k={spec.k}, got {len(seqs)}")
    for j, win in enumerate(seqs, start=1):
        need = bin(j).count("1") * (N - 1)
        win.require(0, need, f"cubic average window {j}")
    return seqs


def _as_matrix(seqs, length: int) -> np.ndarray:
    mat = np.zeros((len(seqs), length), dtype=np.complex128)
    for row, win in enumerate(seqs):
        vals = win.rebased(0)
        take = min(len(vals), length)
        mat[row, :take] = vals[:take]
    return mat


def _require_real_unit(windows, what: str) -> None:
    for j, win in enumerate(windows, start=1):
        if win.bound > 1.0 + REAL_SLACK:
            raise ConfigError(f"{what}: window {j} bound {win.bound} exceeds 1")
        if float(np.max(np.abs(win.values.imag))) > REAL_SLACK:
            raise ConfigError(f"{what}: window {j} is not real-valued")


# ---------------------------------------------------------------------------
# cubic averages
# ---------------------------------------------------------------------------

def cubic_average(spec: CubeSpec, N: int, sequences, method: str = "auto", budget=None) -> complex:
    """C(N; a_1, ..., a_(2^k-1)) = (1/N^k) sum over h in [N]^k of the
    phi-indexed vertex products.

    method "direct" runs the exact nested sum; "fft" (k = 2 only) uses
    C(N; a, b, c) = (1/N^2) sum_n a_n (sum_m b_m c_(n+m)) with the inner
    correlation done by zero-padded FFT; "auto" picks fft for k = 2 with
    N >= 64.
    """
    N = int(N)
    if N < 1:
        raise ConfigError("cubic average needs N >= 1")
    k = spec.k
    charge(N**k, budget, f"cubic average k={k} N={N}")
    seqs = _require_star_windows(spec, N, sequences)
    if method not in ("auto", "direct", "fft"):
        raise ConfigError(f"unknown cubic method {method!r}")
    if method == "fft" and k != 2:
        raise ConfigError("fft path exists only for k = 2")
    if k > 4 and method != "fft":
        raise ConfigError("direct cubic sums are implemented for k <= 4")
    use_fft = method == "fft" or (method == "auto" and k == 2 and N >= 64)
    if use_fft:
        a1 = seqs[0].segment(0, N)
        b = seqs[1].segment(0, N)
        c = seqs[2].segment(0, 2 * N - 1)
        m = 3 * N - 2  # linear-convolution length
        conv = np.fft.ifft(np.fft.fft(c, m) * np.fft.fft(b[::-1], m))
        inner = conv[N - 1 : 2 * N - 1]  # inner[n] = sum_m b_m c_(n+m)
        return complex(pairwise_sum(a1 * inner) / (N * N))
    mat = _as_matrix(seqs, k * (N - 1) + 1)
    return complex(kernels.cubic_direct(mat, N, k))


@dataclass(frozen=True)
class AssaniReport:
    lhs_sq: float
    mid_sq: float
    rhs_sup_sq: float
    holds: bool
    N: int
    sup: SupBound


def assani_check(N: int, a: SequenceWindow, b: SequenceWindow, c: SequenceWindow,
                 oversample: int = 8) -> AssaniReport:
    """The two-step chain bounding |(1/N^2) sum a_n b_m c_(n+m)|^2.

    Middle term: (1/N) sum_n |(1/N) sum_m b_m c_(n+m)|^2.  Right term:
    certified sup over t of |(1/N) sum_{m=0}^{2(N-1)} e(2 pi i m t) c_m|,
    squared, so the verdict stays sound under grid discretization.
    """
    N = int(N)
    if N < 1:
        raise ConfigError("assani check needs N >= 1")
    _require_real_unit([a, b, c], "assani check")
    a.require(0, N - 1, "assani check")
    b.require(0, N - 1, "assani check")
    c.require(0, 2 * (N - 1), "assani check")
    inner = kernels.assani_inner(
        np.ascontiguousarray(b.segment(0, N)),
        np.ascontiguousarray(c.segment(0, 2 * N - 1)),
        N,
    )
    lhs = pairwise_sum(a.segment(0, N) * inner) / (N * N)
    lhs_sq = float(lhs.real**2 + lhs.imag**2)
    mid_sq = float(pairwise_sum(inner.real**2 + inner.imag**2) / N**3)
    sup = sup_trig(SequenceWindow(0, c.segment(0, 2 * N - 1), c.bound), oversample, normalizer=N)
    rhs_sup_sq = sup.certified_upper**2
    holds = leq_tol(lhs_sq, mid_sq) and leq_tol(mid_sq, rhs_sup_sq)
    return AssaniReport(lhs_sq, mid_sq, rhs_sup_sq, holds, N, sup)


@dataclass(frozen=True)
class CubicEstimateReport:
    lhs_sq: float
    rhs: float
    holds: bool
    k: int
    N: int


def cubic_estimate_check(spec: CubeSpec, N: int, sequences, oversample: int = 8,
                         budget=None) -> CubicEstimateReport:
    """|C(N; ...)|^2 against (2/N^k) sum over (h_1..h_(k-2)) of the certified
    sup over t of |sum_(h_k) e(2 pi i h_k t) prod_(eps in A^k_(k-1)) a_...|^2.

    The product runs over the vertices with eps_(k-1) = 0, eps_k = 1; the
    constant 2 is the absolute constant of the estimate.
    """
    k = spec.k
    if k not in (3, 4):
        raise ConfigError("cubic estimate check needs k in {3, 4}")
    N = int(N)
    if N < 1:
        raise ConfigError("cubic estimate check needs N >= 1")
    seqs = _require_star_windows(spec, N, sequences)
    _require_real_unit(seqs, "cubic estimate check")
    charge(N**k, budget, f"cubic estimate k={k} N={N}")
    val = cubic_average(spec, N, seqs, method="direct", budget=budget)
    lhs_sq = float(val.real**2 + val.imag**2)
    # phi indices of A^k_(k-1): bit k-1 set (eps_k = 1), bit k-2 clear.
    members = [
        j for j in range(1, 2**k)
        if (j >> (k - 1)) & 1 == 1 and (j >> (k - 2)) & 1 == 0
    ]
    rebased = [win.rebased(0) for win in seqs]
    sups = np.empty(N ** (k - 2), dtype=np.float64)
    for t, hs in enumerate(itertools.product(range(N), repeat=k - 2)):
        coeffs = np.ones(N, dtype=np.complex128)
        for j in members:
            off = sum(hs[i] for i in range(k - 2) if (j >> i) & 1)
            coeffs = coeffs * rebased[j - 1][off : off + N]
        sup = sup_trig(SequenceWindow(0, coeffs, 1.0), oversample)
        sups[t] = sup.certified_upper**2
    rhs = float(2.0 * pairwise_sum(sups) / N**k)
    return CubicEstimateReport(lhs_sq, rhs, leq_tol(lhs_sq, rhs), k, N)


# ---------------------------------------------------------------------------
# local correlations and seminorms of sequences
# ---------------------------------------------------------------------------

def local_correlation(a: SequenceWindow, k: int, h, N: int) -> complex:
    """Finite surrogate of c_h: (1/N) sum_{n<N} prod over eps in V_k of
    C^|eps| a_(n + h.eps), conjugating on odd vertices."""
    h = tuple(int(v) for v in h)
    if len(h) != k or k < 1:
        raise ConfigError(f"shift tuple {h} does not match k={k}")
    N = int(N)
    if N < 1:
        raise ConfigError("local correlation needs N >= 1")
    lo = sum(min(v, 0) for v in h)
    hi = N - 1 + sum(max(v, 0) for v in h)
    a.require(lo, hi, "local correlation")
    prod = np.ones(N, dtype=np.complex128)
    for v in range(2**k):
        off = sum(h[i] for i in range(k) if (v >> i) & 1)
        seg = a.segment(off, N)
        prod = prod * (np.conj(seg) if bin(v).count("1") & 1 else seg)
    return complex(pairwise_sum(prod) / N)


@dataclass(frozen=True)
class CorrelationTable:
    """Finite-surrogate correlations on the grid h in [H]^k."""

    k: int
    H: int
    source_n: int
    entries: np.ndarray  # shape (H,)*k, index order (h_1, ..., h_k)


def _cube_grid_values(a: SequenceWindow, k: int, H: int, N: int, budget) -> np.ndarray:
    if k < 1 or H < 1 or N < 1:
        raise ConfigError("cube grid needs k, H, N >= 1")
    charge(H**k * N * 2**k, budget, f"cube correlation grid k={k} H={H} N={N}")
    a.require(0, N - 1 + k * (H - 1), "cube correlation grid")
    arr = np.ascontiguousarray(a.segment(0, N + k * (H - 1)))
    return kernels.local_cube_values(arr, k, H, N)


def correlation_table(a: SequenceWindow, k: int, H: int, N: int, budget=None) -> CorrelationTable:
    flat = _cube_grid_values(a, k, H, N, budget)
    return CorrelationTable(k=k, H=H, source_n=N, entries=flat.reshape((H,) * k))


@dataclass(frozen=True)
class LocalSeminorm:
    """Windowed local seminorm at scales (H, N); clamped flags a negative
    finite-scale cube average zeroed before the 2^k-th root."""

    value: float
    mean: complex
    clamped: bool
    k: int
    H: int
    N: int

    def __float__(self) -> float:
        return self.value


def local_seminorm(a: SequenceWindow, k: int, H: int, N: int, budget=None) -> LocalSeminorm:
    """((1/H^k) sum over h in [H]^k of Re c_h(N)) ^ (1/2^k), clamped at 0."""
    flat = _cube_grid_values(a, k, H, N, budget)
    mean = complex(pairwise_sum(flat) / len(flat))
    clamped = mean.real < 0.0
    value = 0.0 if clamped else float(mean.real) ** (1.0 / 2**k)
    return LocalSeminorm(value=value, mean=mean, clamped=clamped, k=k, H=H, N=N)


# ---------------------------------------------------------------------------
# cyclic-group box norms (the exact oracle)
# ---------------------------------------------------------------------------

def gowers_norm_cyclic(f, k: int, budget=None) -> float:
    """U^k norm of f on Z_p: ((1/p^(k+1)) sum over n, h of the conjugated
    vertex products) ^ (1/2^k).  Exact up to roundoff; always nonnegative."""
    arr = np.ascontiguousarray(np.asarray(f, dtype=np.complex128))
    if arr.ndim != 1 or arr.size < 1:
        raise ConfigError("cyclic norm needs a nonempty 1-d array")
    if k < 1:
        raise ConfigError("cyclic norm needs k >= 1")
    p = arr.size
    charge(p ** (k + 1), budget, f"cyclic U^{k} norm on Z_{p}")
    power = float(kernels.gowers_pow(arr, k))
    if power < -REAL_SLACK:
        raise AssertionError(f"cyclic norm power {power} < -1e-12; broken kernel")
    return max(power, 0.0) ** (1.0 / 2**k)


def fourier_u2_power(f) -> float:
    """Sum of |f-hat|^4 with the normalized DFT; equals U^2(f)^4 on Z_p."""
    arr = np.asarray(f, dtype=np.complex128)
    fhat = np.fft.fft(arr) / arr.size
    mags = np.abs(fhat) ** 4
    return float(pairwise_sum(mags))


# ---------------------------------------------------------------------------
# recursive orbit estimator of the system seminorm
# ---------------------------------------------------------------------------

def _hk_pow(seq: np.ndarray, k: int, H: int, N: int) -> float:
    """Estimator of ||.||_k^(2^k) from a sequence window of length
    N + (k-1)(H-1): the averaged-shift recursion on top of |Birkhoff mean|."""
    if k == 1:
        m = pairwise_sum(seq[:N]) / N
        return float(m.real**2 + m.imag**2)
    need = N + (k - 2) * (H - 1)
    vals = np.empty(H, dtype=np.float64)
    for h in range(H):
        vals[h] = _hk_pow(seq[:need] * np.conj(seq[h : h + need]), k - 1, H, N)
    return float(pairwise_sum(vals) / H)


def _resolve_starts(sys, x):
    if isinstance(x, str):
        if x != "integrate":
            raise ConfigError(f"unknown start state {x!r}")
        if not isinstance(sys, FinitePermutation):
            raise ConfigError("integrate mode needs a finite system")
        return list(range(sys.size))
    return [x]


def _hk_power_system(sys, x, f, k: int, H: int, N: int, budget) -> float:
    starts = _resolve_starts(sys, x)
    charge(H ** (k - 1) * N * len(starts), budget, f"seminorm estimator k={k} H={H} N={N}")
    need = N + (k - 1) * (H - 1)
    pows = np.array([
        _hk_pow(orbit_samples(sys, s, f, 1, need).values, k, H, N) for s in starts
    ])
    return float(pairwise_sum(pows) / len(pows))


def hk_seminorm_estimate(sys, x, f, k: int, H: int, N: int, budget=None) -> float:
    """Finite-(H, N) value of the recursive seminorm estimator.

    Level j >= 2 averages the level j-1 powers of f . T^h conj(f) over
    h in [0, H); the bottom level is |Birkhoff average of length N| along
    the orbit.  x may be a start state, or "integrate" on finite systems
    to average the 2^k-th powers over the whole state space.  On a finite
    system with H and N multiples of the period the value is exact.
    """
    if k < 1 or H < 1 or N < 1:
        raise ConfigError("seminorm estimator needs k, H, N >= 1")
    power = _hk_power_system(sys, x, f, k, H, N, budget)
    return max(power, 0.0) ** (1.0 / 2**k)


@dataclass(frozen=True)
class HkVdcReport:
    """Finite-scale surrogate of the averaged-shift bound
    avg_h ||f . T^(a h) f||_k^(2^k)  <=  |a| ||f||_(k+1)^(2^(k+1));
    asymptotic, so only reported, never a verdict."""

    lhs: float
    rhs: float
    a: int
    k: int
    H: int
    N: int

    @property
    def ratio(self) -> float:
        if self.rhs == 0.0:
            return 0.0 if self.lhs == 0.0 else float("inf")
        return self.lhs / self.rhs


def hk_vdc_bound_report(sys, f, a: int, k: int, H: int, N: int, x="integrate",
                        budget=None) -> HkVdcReport:
    """Both sides of the averaged-shift estimate at finite (H, N) scales.

    f must be real-valued: the left side multiplies shifted copies without
    conjugation, as in the displayed estimate.
    """
    a = int(a)
    if a == 0:
        raise ConfigError("shift multiplier a must be nonzero")
    if k < 1 or H < 1 or N < 1:
        raise ConfigError("report needs k, H, N >= 1")
    starts = _resolve_starts(sys, x)
    charge(H**k * N * len(starts) * 2, budget, f"averaged-shift report k={k} H={H} N={N}")
    need = N + (k - 1) * (H - 1)
    lo = min(0, a * (H - 1))
    hi = need - 1 + max(0, a * (H - 1))
    orbits = [samples_at_counts(sys, s, f, range(lo, hi + 1)).values for s in starts]
    if any(float(np.max(np.abs(o.imag))) > REAL_SLACK for o in orbits):
        raise ConfigError("averaged-shift report needs a real-valued observable")
    base = -lo  # orbit array position of iterate count 0

    hvals = np.empty(H, dtype=np.float64)
    for h in range(H):
        s0 = base + a * h
        per_start = np.array([
            _hk_pow(orb[base : base + need] * orb[s0 : s0 + need], k, H, N)
            for orb in orbits
        ])
        hvals[h] = float(pairwise_sum(per_start) / len(per_start))
    lhs = float(pairwise_sum(hvals) / H)
    rhs = abs(a) * _hk_power_system(sys, x, f, k + 1, H, N, budget)
    return HkVdcReport(lhs=lhs, rhs=rhs, a=a, k=k, H=H, N=N)
