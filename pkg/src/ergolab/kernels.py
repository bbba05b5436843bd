"""Hot numeric kernels.

Every kernel exists twice: a loop-flavour source compiled with numba
(``*_loops``) and a vectorized pure-numpy twin (``*_np``).  Both flavours
reduce through the same fixed pairwise tree, so a given input produces the
same result (to the last bit, modulo compiler FMA decisions) on either
backend, and results never depend on worker count.  The public names
dispatch on the ERGOLAB_NO_NUMBA flag; see backend.py.

Conventions: sequence arrays are rebased so that position 0 is the lowest
index the kernel touches, windows are complex128, and callers have already
validated coverage and budgets.
"""

import itertools

import numpy as np

from .backend import USE_NUMBA, jit


# ---------------------------------------------------------------------------
# pairwise reduction
# ---------------------------------------------------------------------------

def _pairwise_loops(buf):
    # In-place tree reduction: adjacent pairs, odd leftover carried.
    n = buf.shape[0]
    while n > 1:
        m = n // 2
        for i in range(m):
            buf[i] = buf[2 * i] + buf[2 * i + 1]
        if n & 1:
            buf[m] = buf[n - 1]
            n = m + 1
        else:
            n = m
    return buf[0]


def _pairwise_np(buf):
    # Same tree as _pairwise_loops, expressed with strided slices.
    n = buf.shape[0]
    while n > 1:
        m = n // 2
        head = buf[0 : 2 * m : 2] + buf[1 : 2 * m : 2]
        buf[:m] = head
        if n & 1:
            buf[m] = buf[n - 1]
            n = m + 1
        else:
            n = m
    return buf[0]


_pairwise_loops = jit(_pairwise_loops)


def pairwise_sum(a) -> complex:
    """Fixed-order pairwise sum of a 1-d array (copy taken, len >= 1)."""
    buf = np.array(a, dtype=np.complex128 if np.iscomplexobj(a) else np.float64)
    if buf.size == 0:
        raise ValueError("pairwise_sum of empty array")
    return _pairwise_np(buf)


def prefix_pairwise_means(values: np.ndarray, schedule) -> np.ndarray:
    """Pairwise mean of values[:N] for each N in schedule."""
    out = np.empty(len(schedule), dtype=np.complex128)
    for j, n in enumerate(schedule):
        out[j] = _pairwise_np(values[:n].astype(np.complex128)) / n
    return out


# ---------------------------------------------------------------------------
# van der Corput sums
# ---------------------------------------------------------------------------

def _vdc_sums_loops(u, N, H):
    # u[0] is the value at sequence index 1; len(u) >= N.  Autocorrelations
    # truncate at N - h (the zero extension of the classical lemma).
    buf_c = np.empty(N, np.complex128)
    for i in range(N):
        buf_c[i] = u[i]
    S = _pairwise_loops(buf_c)
    buf_r = np.empty(N, np.float64)
    for i in range(N):
        buf_r[i] = u[i].real * u[i].real + u[i].imag * u[i].imag
    Q = _pairwise_loops(buf_r)
    W = 0.0
    if H > 1:
        wbuf = np.empty(H - 1, np.float64)
        cbuf = np.empty(N, np.complex128)
        for h in range(1, H):
            m = N - h
            for i in range(m):
                cbuf[i] = u[i] * u[i + h].conjugate()
            ch = _pairwise_loops(cbuf[:m])
            wbuf[h - 1] = (H - h) * ch.real
        W = _pairwise_loops(wbuf)
    return S, Q, W


def _vdc_sums_np(u, N, H):
    S = _pairwise_np(u[:N].astype(np.complex128))
    head = u[:N]
    Q = _pairwise_np((head.real * head.real + head.imag * head.imag).astype(np.float64))
    W = 0.0
    if H > 1:
        wbuf = np.empty(H - 1, np.float64)
        for h in range(1, H):
            m = N - h
            ch = _pairwise_np(u[:m] * np.conj(u[h : h + m]))
            wbuf[h - 1] = (H - h) * ch.real
        W = _pairwise_np(wbuf)
    return S, Q, W


_vdc_sums_loops = jit(_vdc_sums_loops)


# ---------------------------------------------------------------------------
# Assani inner averages: inner[n] = sum_m b[m] * c[n + m]
# ---------------------------------------------------------------------------

def _assani_inner_loops(b, c, N):
    out = np.empty(N, np.complex128)
    buf = np.empty(N, np.complex128)
    for n in range(N):
        for m in range(N):
            buf[m] = b[m] * c[n + m]
        out[n] = _pairwise_loops(buf)
    return out


def _assani_inner_np(b, c, N):
    out = np.empty(N, np.complex128)
    for n in range(N):
        out[n] = _pairwise_np(b[:N] * c[n : n + N])
    return out


_assani_inner_loops = jit(_assani_inner_loops)


# ---------------------------------------------------------------------------
# cubic averages, direct sums (k = 1..4), pairwise per nesting level
# ---------------------------------------------------------------------------

def _cubic_k1_loops(a1, N):
    buf = np.empty(N, np.complex128)
    for i in range(N):
        buf[i] = a1[i]
    return _pairwise_loops(buf) / N


def _cubic_k2_loops(a1, a2, a3, N):
    mid = np.empty(N, np.complex128)
    buf = np.empty(N, np.complex128)
    for h1 in range(N):
        for h2 in range(N):
            buf[h2] = a2[h2] * a3[h1 + h2]
        mid[h1] = a1[h1] * _pairwise_loops(buf)
    return _pairwise_loops(mid) / (N * N)


def _cubic_k3_loops(a1, a2, a3, a4, a5, a6, a7, N):
    mid1 = np.empty(N, np.complex128)
    mid2 = np.empty(N, np.complex128)
    buf = np.empty(N, np.complex128)
    for h1 in range(N):
        for h2 in range(N):
            for h3 in range(N):
                buf[h3] = a4[h3] * a5[h1 + h3] * a6[h2 + h3] * a7[h1 + h2 + h3]
            mid2[h2] = a2[h2] * a3[h1 + h2] * _pairwise_loops(buf)
        mid1[h1] = a1[h1] * _pairwise_loops(mid2)
    return _pairwise_loops(mid1) / (N * N * N)


def _cubic_k4_loops(a1, a2, a3, a4, a5, a6, a7, a8, a9, a10, a11, a12, a13, a14, a15, N):
    mid1 = np.empty(N, np.complex128)
    mid2 = np.empty(N, np.complex128)
    mid3 = np.empty(N, np.complex128)
    buf = np.empty(N, np.complex128)
    for h1 in range(N):
        for h2 in range(N):
            for h3 in range(N):
                for h4 in range(N):
                    buf[h4] = (
                        a8[h4]
                        * a9[h1 + h4]
                        * a10[h2 + h4]
                        * a11[h1 + h2 + h4]
                        * a12[h3 + h4]
                        * a13[h1 + h3 + h4]
                        * a14[h2 + h3 + h4]
                        * a15[h1 + h2 + h3 + h4]
                    )
                mid3[h3] = (
                    a4[h3] * a5[h1 + h3] * a6[h2 + h3] * a7[h1 + h2 + h3] * _pairwise_loops(buf)
                )
            mid2[h2] = a2[h2] * a3[h1 + h2] * _pairwise_loops(mid3)
        mid1[h1] = a1[h1] * _pairwise_loops(mid2)
    return _pairwise_loops(mid1) / (N * N * N * N)


_cubic_k1_loops = jit(_cubic_k1_loops)
_cubic_k2_loops = jit(_cubic_k2_loops)
_cubic_k3_loops = jit(_cubic_k3_loops)
_cubic_k4_loops = jit(_cubic_k4_loops)


def _cubic_direct_loops(seqs, N, k):
    if k == 1:
        return _cubic_k1_loops(seqs[0], N)
    if k == 2:
        return _cubic_k2_loops(seqs[0], seqs[1], seqs[2], N)
    if k == 3:
        return _cubic_k3_loops(seqs[0], seqs[1], seqs[2], seqs[3], seqs[4], seqs[5], seqs[6], N)
    return _cubic_k4_loops(
        seqs[0], seqs[1], seqs[2], seqs[3], seqs[4], seqs[5], seqs[6], seqs[7],
        seqs[8], seqs[9], seqs[10], seqs[11], seqs[12], seqs[13], seqs[14], N,
    )


def _cubic_direct_np(seqs, N, k):
    if k == 1:
        return _pairwise_np(seqs[0][:N].copy()) / N
    if k == 2:
        a1, a2, a3 = seqs
        mid = np.empty(N, np.complex128)
        for h1 in range(N):
            mid[h1] = a1[h1] * _pairwise_np(a2[:N] * a3[h1 : h1 + N])
        return _pairwise_np(mid) / (N * N)
    if k == 3:
        a1, a2, a3, a4, a5, a6, a7 = seqs
        mid1 = np.empty(N, np.complex128)
        mid2 = np.empty(N, np.complex128)
        for h1 in range(N):
            for h2 in range(N):
                inner = a4[:N] * a5[h1 : h1 + N] * a6[h2 : h2 + N] * a7[h1 + h2 : h1 + h2 + N]
                mid2[h2] = a2[h2] * a3[h1 + h2] * _pairwise_np(inner)
            mid1[h1] = a1[h1] * _pairwise_np(mid2.copy())
        return _pairwise_np(mid1) / (N * N * N)
    a = seqs
    mid1 = np.empty(N, np.complex128)
    mid2 = np.empty(N, np.complex128)
    mid3 = np.empty(N, np.complex128)
    for h1 in range(N):
        for h2 in range(N):
            for h3 in range(N):
                inner = (
                    a[7][:N]
                    * a[8][h1 : h1 + N]
                    * a[9][h2 : h2 + N]
                    * a[10][h1 + h2 : h1 + h2 + N]
                    * a[11][h3 : h3 + N]
                    * a[12][h1 + h3 : h1 + h3 + N]
                    * a[13][h2 + h3 : h2 + h3 + N]
                    * a[14][h1 + h2 + h3 : h1 + h2 + h3 + N]
                )
                mid3[h3] = a[3][h3] * a[4][h1 + h3] * a[5][h2 + h3] * a[6][h1 + h2 + h3] * _pairwise_np(inner)
            mid2[h2] = a[1][h2] * a[2][h1 + h2] * _pairwise_np(mid3.copy())
        mid1[h1] = a[0][h1] * _pairwise_np(mid2.copy())
    return _pairwise_np(mid1) / (N * N * N * N)


# ---------------------------------------------------------------------------
# cube correlation values over the h-grid [H]^k
# ---------------------------------------------------------------------------

def _local_cube_values_loops(a, k, H, N):
    # out[t] = (1/N) sum_n prod_{eps} C^{|eps|} a[n + eps.h], h decoded from t
    # with the last coordinate varying fastest (itertools.product order).
    nverts = 1 << k
    odd = np.empty(nverts, np.uint8)
    for v in range(nverts):
        pc = 0
        vv = v
        while vv > 0:
            pc += vv & 1
            vv >>= 1
        odd[v] = pc & 1
    total = H**k
    out = np.empty(total, np.complex128)
    buf = np.empty(N, np.complex128)
    h = np.empty(k, np.int64)
    offs = np.empty(nverts, np.int64)
    for t in range(total):
        rem = t
        for j in range(k - 1, -1, -1):
            h[j] = rem % H
            rem //= H
        for v in range(nverts):
            off = 0
            for i in range(k):
                if (v >> i) & 1:
                    off += h[i]
            offs[v] = off
        for n in range(N):
            term = 1.0 + 0.0j
            for v in range(nverts):
                x = a[n + offs[v]]
                if odd[v] == 1:
                    term = term * x.conjugate()
                else:
                    term = term * x
            buf[n] = term
        out[t] = _pairwise_loops(buf) / N
    return out


def _local_cube_values_np(a, k, H, N):
    nverts = 1 << k
    odd = [bin(v).count("1") & 1 for v in range(nverts)]
    out = np.empty(H**k, np.complex128)
    for t, h in enumerate(itertools.product(range(H), repeat=k)):
        prod = np.ones(N, np.complex128)
        for v in range(nverts):
            off = sum(h[i] for i in range(k) if (v >> i) & 1)
            seg = a[off : off + N]
            prod = prod * (np.conj(seg) if odd[v] else seg)
        out[t] = _pairwise_np(prod) / N
    return out


_local_cube_values_loops = jit(_local_cube_values_loops)


# ---------------------------------------------------------------------------
# Gowers box powers on Z_p: returns U_k(f)^(2^k)
# ---------------------------------------------------------------------------

def _gowers_pow_loops(f, k):
    p = f.shape[0]
    buf = np.empty(p, np.complex128)
    if k == 1:
        for i in range(p):
            buf[i] = f[i]
        m = _pairwise_loops(buf) / p
        return m.real * m.real + m.imag * m.imag
    total = p ** (k - 1)
    vals = np.empty(total, np.float64)
    h = np.empty(k - 1, np.int64)
    g = np.empty(p, np.complex128)
    tmp = np.empty(p, np.complex128)
    for t in range(total):
        rem = t
        for j in range(k - 2, -1, -1):
            h[j] = rem % p
            rem //= p
        for i in range(p):
            g[i] = f[i]
        for j in range(k - 1):
            hh = h[j]
            for i in range(p):
                tmp[i] = g[i] * g[(i + hh) % p].conjugate()
            for i in range(p):
                g[i] = tmp[i]
        for i in range(p):
            buf[i] = g[i]
        m = _pairwise_loops(buf) / p
        vals[t] = m.real * m.real + m.imag * m.imag
    return _pairwise_loops(vals) / total


def _gowers_pow_np(f, k):
    p = f.shape[0]
    if k == 1:
        m = _pairwise_np(f.astype(np.complex128)) / p
        return float(m.real * m.real + m.imag * m.imag)
    total = p ** (k - 1)
    vals = np.empty(total, np.float64)
    for t, hs in enumerate(itertools.product(range(p), repeat=k - 1)):
        g = f.astype(np.complex128)
        for hh in hs:
            g = g * np.conj(np.roll(g, -hh))
        m = _pairwise_np(g) / p
        vals[t] = m.real * m.real + m.imag * m.imag
    return float(_pairwise_np(vals) / total)


_gowers_pow_loops = jit(_gowers_pow_loops)


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

if USE_NUMBA:
    vdc_sums = _vdc_sums_loops
    assani_inner = _assani_inner_loops
    cubic_direct = _cubic_direct_loops
    local_cube_values = _local_cube_values_loops
    gowers_pow = _gowers_pow_loops
else:
    vdc_sums = _vdc_sums_np
    assani_inner = _assani_inner_np
    cubic_direct = _cubic_direct_np
    local_cube_values = _local_cube_values_np
    gowers_pow = _gowers_pow_np


def warm_up() -> None:
    """Trigger JIT compilation of all dispatched kernels on tiny inputs."""
    u = np.array([1.0 + 0j, 0.5j, -0.25, 0.1 + 0.1j])
    vdc_sums(u, 2, 2)
    assani_inner(u, u, 2)
    for k, count in ((1, 1), (2, 3), (3, 7), (4, 15)):
        seqs = np.ones((count, 2 * (k + 1)), np.complex128)
        cubic_direct(seqs, 2, k)
    local_cube_values(u, 1, 2, 2)
    gowers_pow(u, 1)
    gowers_pow(u, 2)
