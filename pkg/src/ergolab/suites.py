"""Named verification suites with shipped seeds.

"inequalities" runs the exact finite-N inequality batteries, "oracles" the
cross-module equality batteries, "convergence" the Cauchy-tail
diagnostics.  Sizes and seeds are fixed here; the CLI runs the cases
(possibly in parallel) and aggregates verdicts.
"""

from __future__ import annotations

import math

from .batteries import (
    ALPHA_GOLDEN,
    BatteryResult,
    assani_battery,
    character_tail_diagnostic,
    cubic_battery,
    gowers_battery,
    heisenberg_matrix_battery,
    hk_oracle_battery,
    periodic_tail_diagnostic,
    quadratic_phase_check,
    selfjoining_battery,
    vdc_battery,
    ww_tail_diagnostic,
)

QUAD_PHASES = (ALPHA_GOLDEN, 1.0 / 3.0, math.sqrt(2.0) - 1.0, 0.123456789)


def _suite_inequalities():
    return [
        ("vdc_battery", lambda budget: vdc_battery(1000, 512, 20240811)),
        ("assani_battery", lambda budget: assani_battery(1000, 128, 20240812)),
        ("cubic_estimate_k3", lambda budget: cubic_battery(3, 200, 16, 20240813, budget=budget)),
        ("cubic_estimate_k4", lambda budget: cubic_battery(4, 50, 8, 20240814, budget=budget)),
    ]


def _suite_oracles():
    return [
        ("gowers_monotone_fourier",
         lambda budget: gowers_battery((5, 7, 11, 13), 50, 3, 20240815, budget=budget)),
        ("hk_vs_cyclic", lambda budget: hk_oracle_battery(40, 20240816)),
        ("selfjoining_exactness", lambda budget: selfjoining_battery(100, 20240817)),
        ("quadratic_phase", lambda budget: quadratic_phase_check(QUAD_PHASES, 10_000)),
        ("heisenberg_closed_form", lambda budget: heisenberg_matrix_battery(6, 20240818)),
    ]


def _suite_convergence():
    return [
        ("ww_golden_grid", lambda budget: ww_tail_diagnostic(20, 4, 13)),
        ("torus_character_tails", lambda budget: character_tail_diagnostic(5, 4, 13)),
        ("periodic_stabilization", lambda budget: periodic_tail_diagnostic(20240819)),
    ]


SUITES = {
    "inequalities": _suite_inequalities,
    "oracles": _suite_oracles,
    "convergence": _suite_convergence,
}


def suite_cases(name: str):
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name]()


__all__ = ["SUITES", "suite_cases", "BatteryResult", "QUAD_PHASES"]
