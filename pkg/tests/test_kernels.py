"""Backend twins must agree; pairwise reduction must match a precise oracle."""

import math

import numpy as np
import pytest

from ergolab import kernels as K


@pytest.fixture(scope="module")
def rng():
    return np.random.default_rng(2024)


def test_pairwise_matches_fsum(rng):
    for n in (1, 2, 3, 7, 64, 1001):
        a = rng.uniform(-1, 1, n)
        assert K.pairwise_sum(a) == pytest.approx(math.fsum(a), abs=1e-12)


def test_pairwise_complex(rng):
    a = rng.uniform(-1, 1, 321) + 1j * rng.uniform(-1, 1, 321)
    got = K.pairwise_sum(a)
    assert got.real == pytest.approx(math.fsum(a.real), abs=1e-12)
    assert got.imag == pytest.approx(math.fsum(a.imag), abs=1e-12)


def test_pairwise_empty_rejected():
    with pytest.raises(ValueError):
        K.pairwise_sum(np.array([]))


@pytest.mark.parametrize("N,H", [(1, 1), (5, 3), (100, 37), (511, 511)])
def test_vdc_twins_agree(rng, N, H):
    u = rng.random(N) * np.exp(2j * np.pi * rng.random(N))
    a = K._vdc_sums_loops(u, N, H)
    b = K._vdc_sums_np(u, N, H)
    assert a[0] == pytest.approx(b[0], abs=1e-12)
    assert a[1] == pytest.approx(b[1], rel=1e-12)
    assert a[2] == pytest.approx(b[2], abs=1e-9 * max(1.0, abs(b[2])))


def test_assani_twins_agree(rng):
    N = 48
    b = rng.uniform(-1, 1, N).astype(np.complex128)
    c = rng.uniform(-1, 1, 2 * N - 1).astype(np.complex128)
    x = K._assani_inner_loops(b, c, N)
    y = K._assani_inner_np(b, c, N)
    assert np.max(np.abs(x - y)) < 1e-12


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_cubic_twins_agree(rng, k):
    N = {1: 64, 2: 24, 3: 9, 4: 5}[k]
    seqs = rng.uniform(-1, 1, (2**k - 1, k * (N - 1) + 1)).astype(np.complex128)
    a = K._cubic_direct_loops(seqs, N, k)
    b = K._cubic_direct_np(seqs, N, k)
    assert a == pytest.approx(b, abs=1e-12)


@pytest.mark.parametrize("k,H,N", [(1, 6, 9), (2, 4, 6), (3, 3, 4)])
def test_local_cube_twins_agree(rng, k, H, N):
    a = rng.uniform(-1, 1, N + k * (H - 1)) + 1j * rng.uniform(-1, 1, N + k * (H - 1))
    x = K._local_cube_values_loops(a, k, H, N)
    y = K._local_cube_values_np(a, k, H, N)
    assert np.max(np.abs(x - y)) < 1e-12


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_gowers_twins_agree(rng, k):
    f = (rng.uniform(-1, 1, 7) + 1j * rng.uniform(-1, 1, 7)).astype(np.complex128)
    assert K._gowers_pow_loops(f, k) == pytest.approx(K._gowers_pow_np(f, k), abs=1e-14)


def test_prefix_means_match_direct(rng):
    vals = rng.uniform(-1, 1, 100).astype(np.complex128)
    out = K.prefix_pairwise_means(vals, [1, 10, 100])
    for j, n in enumerate([1, 10, 100]):
        assert out[j] == pytest.approx(vals[:n].mean(), abs=1e-13)
