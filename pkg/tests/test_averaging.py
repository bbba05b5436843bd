"""Averaging engines, certified sups, and the exact van der Corput check."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as hst

from ergolab.averaging import (
    multilinear_average,
    sup_trig,
    van_der_corput_check,
    weighted_average_of_window,
)
from ergolab.batteries import draw_rng, draw_vdc
from ergolab.dynsys import Character, FinitePermutation, Table, TorusRotation, orbit_samples
from ergolab.errors import ConfigError, WindowError
from ergolab.nilseq import TrigPhase, weight_window
from ergolab.windows import SequenceWindow, constant_window


# ---------------------------------------------------------------------------
# multilinear averages
# ---------------------------------------------------------------------------

def test_all_ones_average_is_one():
    sys = FinitePermutation([2, 0, 1])
    series = multilinear_average(sys, 0, [Table([1, 1, 1])] * 2, [1, 2], None, [1, 5, 9])
    assert np.max(np.abs(series.averages - 1)) < 1e-14


def test_cube_roots_cancel():
    series = multilinear_average(
        TorusRotation((1 / 3,)), (0.0,), [Character(1)], [1], None, [3]
    )
    assert abs(series.averages[0]) < 1e-14


def test_two_cycle_tables_example():
    sys = FinitePermutation([1, 0])
    f = Table([1, -1])
    series = multilinear_average(sys, 0, [f, f], [1, 2], None, [2])
    assert series.averages[0] == 0


def test_weighted_matches_window_route():
    sys = TorusRotation((0.37,))
    obs = [Character(1), Character(2)]
    weight = TrigPhase(0.21)
    sched = [4, 16, 40]
    series = multilinear_average(sys, (0.0,), obs, [1, 2], weight, sched)
    prod = orbit_samples(sys, (0.0,), obs[0], 1, 40).values.copy()
    prod *= orbit_samples(sys, (0.0,), obs[1], 2, 40).values
    a = SequenceWindow(0, prod, 1.0)
    b = weight_window(weight, 0, 40)
    series2 = weighted_average_of_window(a, b, sched)
    assert np.max(np.abs(series.averages - series2.averages)) <= 1e-12


def test_average_warns_on_degenerate_exponents():
    sys = FinitePermutation([1, 0])
    with pytest.warns(UserWarning):
        multilinear_average(sys, 0, [Table([1, -1])] * 2, [1, 1], None, [2])
    with pytest.warns(UserWarning):
        multilinear_average(sys, 0, [Table([1, -1])], [0], None, [2])


def test_average_errors():
    sys = FinitePermutation([1, 0])
    with pytest.raises(ConfigError):
        multilinear_average(sys, 0, [Table([1, -1])], [1, 2], None, [2])
    with pytest.raises(ConfigError):
        multilinear_average(sys, 0, [Table([1, -1])], [1], None, [])


def test_periodic_series_constant_at_period_multiples():
    # dyadic-rational table values make every pairwise sum exact
    sys = FinitePermutation([1, 2, 0])
    f = Table([0.5, -1.0, 0.25])
    series = multilinear_average(sys, 0, [f], [1], None, [3, 6, 12, 24])
    assert all(a == series.averages[0] for a in series.averages)
    assert all(t == 0.0 for t in series.cauchy_tail)


# ---------------------------------------------------------------------------
# weighted window averages
# ---------------------------------------------------------------------------

def test_weighted_window_examples():
    ones = constant_window(1.0, 0, 10)
    assert weighted_average_of_window(ones, ones, [10]).averages[0] == 1

    alt = SequenceWindow(0, [(-1.0) ** n for n in range(7)], 1.0)
    assert weighted_average_of_window(alt, alt, [7]).averages[0] == 1
    got = weighted_average_of_window(alt, constant_window(1.0, 0, 7), [7]).averages[0]
    assert got == pytest.approx(1 / 7, abs=1e-15)


def test_weighted_window_coverage_error():
    short = constant_window(1.0, 0, 3)
    with pytest.raises(WindowError):
        weighted_average_of_window(short, short, [4])


# ---------------------------------------------------------------------------
# certified sup of trigonometric polynomials
# ---------------------------------------------------------------------------

def test_sup_examples():
    s = sup_trig(constant_window(1.0, 0, 7), 8, normalizer=4)
    assert s.grid_max == pytest.approx(7 / 4, abs=1e-12)
    assert s.argmax_t == 0.0
    assert s.certified_upper >= 7 / 4

    c = SequenceWindow(0, np.exp(2j * np.pi * np.arange(7) / 2), 1.0)
    s = sup_trig(c, 8, normalizer=4)
    assert s.grid_max == pytest.approx(7 / 4, abs=1e-12)
    assert s.argmax_t == pytest.approx(0.5)

    # |1 - e(4 pi i t)| peaks at t = 1/4 (value 2); brute force confirms
    s = sup_trig(SequenceWindow(0, [1, 0, -1], 1.0), 16, normalizer=1)
    assert s.grid_max == pytest.approx(2.0, abs=1e-12)
    assert s.argmax_t == pytest.approx(0.25)
    ts = np.linspace(0, 1, 20001)
    brute = np.abs(1 - np.exp(4j * np.pi * ts)).max()
    assert s.certified_upper >= brute - 1e-12


def test_sup_certified_dominates_and_shrinks():
    rng = draw_rng(99, 0)
    vals = rng.uniform(-1, 1, 40) + 1j * rng.uniform(-1, 1, 40)
    win = SequenceWindow(0, vals, float(np.sqrt(2)))
    uppers = []
    grids = []
    for oversample in (4, 8, 16, 32):
        s = sup_trig(win, oversample)
        assert s.grid_max <= s.certified_upper
        uppers.append(s.certified_upper)
        grids.append(s.grid_max)
    # nested grids: grid maxima nondecreasing, certified values nonincreasing
    assert all(g1 <= g2 + 1e-12 for g1, g2 in zip(grids, grids[1:]))
    assert all(u1 >= u2 - 1e-12 for u1, u2 in zip(uppers, uppers[1:]))
    # successive certified values differ by at most the coarser slack range
    L = len(win)
    for j, oversample in enumerate((4, 8, 16)):
        M = oversample * L
        slack = np.pi * (L - 1) / M
        assert uppers[j] - uppers[j + 1] <= grids[j] * slack / (1 - slack) + 1e-12


def test_sup_modulation_shifts_argmax():
    rng = draw_rng(99, 1)
    vals = rng.uniform(-1, 1, 16) + 1j * rng.uniform(-1, 1, 16)
    bound = float(np.sqrt(2))
    win = SequenceWindow(0, vals, bound)
    base = sup_trig(win, 8)
    M = base.grid_size
    shift = 5 / M  # grid-aligned shift: sample sets coincide exactly
    mod = SequenceWindow(0, vals * np.exp(2j * np.pi * np.arange(16) * shift), bound)
    s = sup_trig(mod, 8)
    assert s.grid_max == pytest.approx(base.grid_max, abs=1e-9)
    assert (s.argmax_t + shift) % 1.0 == pytest.approx(base.argmax_t, abs=1e-12)


def test_sup_config_errors():
    with pytest.raises(ConfigError):
        sup_trig(constant_window(1.0, 0, 4), 2)
    with pytest.raises(ConfigError):
        sup_trig(constant_window(1.0, 0, 4), 8, normalizer=0.0)


def test_sup_length_one_is_exact():
    s = sup_trig(constant_window(0.5, 0, 1), 8)
    assert s.grid_max == s.certified_upper == 0.5


# ---------------------------------------------------------------------------
# van der Corput
# ---------------------------------------------------------------------------

def test_vdc_ones_example():
    # truncated autocorrelations: rhs = 2*5*4 + 2*5*(1)*3 = 70
    rep = van_der_corput_check(constant_window(1.0, 1, 5), 4, 2)
    assert rep.lhs == 64.0
    assert rep.rhs == 70.0
    assert rep.holds


def test_vdc_zeros():
    rep = van_der_corput_check(constant_window(0.0, 1, 6), 4, 3)
    assert rep.lhs == rep.rhs == 0.0
    assert rep.holds


def test_vdc_h_equals_one():
    rng = draw_rng(99, 2)
    vals = rng.uniform(-1, 1, 9) + 1j * rng.uniform(-1, 1, 9)
    rep = van_der_corput_check(SequenceWindow(1, vals, float(np.sqrt(2))), 9, 1)
    # H = 1 reduces to Cauchy-Schwarz: |sum u|^2 <= N sum |u|^2
    assert rep.holds


def test_vdc_property_battery_subset():
    for i in range(100):
        win, N, H = draw_vdc(draw_rng(4242, i), 256)
        assert van_der_corput_check(win, N, H).holds


def test_vdc_errors():
    with pytest.raises(ConfigError):
        van_der_corput_check(constant_window(1.0, 1, 5), 3, 4)  # H > N
    with pytest.raises(WindowError):
        van_der_corput_check(constant_window(1.0, 1, 3), 4, 2)  # too short


@given(
    data=hst.data(),
    N=hst.integers(1, 40),
)
@settings(max_examples=60, deadline=None)
def test_vdc_holds_on_adversarial_windows(data, N):
    H = data.draw(hst.integers(1, N))
    mags = data.draw(
        hst.lists(hst.floats(0, 1, allow_nan=False), min_size=N, max_size=N)
    )
    phases = data.draw(
        hst.lists(hst.floats(0, 1, allow_nan=False), min_size=N, max_size=N)
    )
    vals = np.array(mags) * np.exp(2j * np.pi * np.array(phases))
    rep = van_der_corput_check(SequenceWindow(1, vals, 1.0), N, H)
    assert rep.holds
