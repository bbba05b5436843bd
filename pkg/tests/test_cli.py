"""CLI contract: config schema, exit codes, artifacts, determinism."""

import json
import os

import pytest

from ergolab.cli import CaseResult, _summarize, main

BASE_AVERAGE = {
    "kind": "average",
    "system": {"variant": "finite_permutation", "perm": [1, 2, 0]},
    "x": 0,
    "observables": [{"variant": "table", "table": [1, 1, 1]}],
    "exponents": [1],
    "schedule": [3, 6, 12],
}


def write_config(tmp_path, obj, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def read_all_bytes(out_dir):
    blobs = {}
    for name in sorted(os.listdir(out_dir)):
        with open(os.path.join(out_dir, name), "rb") as fh:
            blobs[name] = fh.read()
    return blobs


def test_average_all_ones_emits_unit_rows(tmp_path):
    cfg = write_config(tmp_path, BASE_AVERAGE)
    out = str(tmp_path / "out")
    assert main(["--out", out, "run", cfg]) == 0
    lines = open(os.path.join(out, "case000_average.csv")).read().strip().split("\n")
    assert lines[0] == "N,re,im,cauchy_tail"
    for line in lines[1:]:
        n, re, im, tail = line.split(",")
        assert float(re) == 1.0 and float(im) == 0.0


def test_missing_field_reports_path_and_exits_2(tmp_path, capsys):
    bad = dict(BASE_AVERAGE)
    del bad["exponents"]
    cfg = write_config(tmp_path, bad)
    assert main(["--out", str(tmp_path / "o"), "run", cfg]) == 2
    err = capsys.readouterr().err
    assert "exponents" in err and "cases[0]" in err


def test_unknown_kind_exits_2(tmp_path, capsys):
    cfg = write_config(tmp_path, {"kind": "mystery"})
    assert main(["--out", str(tmp_path / "o"), "run", cfg]) == 2
    assert "mystery" in capsys.readouterr().err


def test_budget_error_exits_3(tmp_path):
    cfg = write_config(tmp_path, {
        "kind": "cubic_estimate", "k": 4, "draws": 1, "max_n": 8, "seed": 1,
    })
    assert main(["--out", str(tmp_path / "o"), "--budget", "10", "run", cfg]) == 3


def test_failed_verdict_maps_to_exit_1():
    results = [
        CaseResult("a", "vdc", True, []),
        CaseResult("b", "vdc", False, []),
    ]
    assert _summarize(results, os.getcwd() if False else "/tmp") == 1


def test_window_error_at_runtime_exits_2(tmp_path):
    cfg = write_config(tmp_path, {
        "kind": "seq_corr",
        "values": [1, 1, 1],
        "offset": 0,
        "shifts": [0, 5],
        "schedule": [3],
    })
    assert main(["--out", str(tmp_path / "o"), "run", cfg]) == 2


def test_vdc_kind_writes_all_holds(tmp_path):
    cfg = write_config(tmp_path, {"kind": "vdc", "draws": 100, "max_n": 128, "seed": 7})
    out = str(tmp_path / "out")
    assert main(["--out", out, "run", cfg]) == 0
    rows = open(os.path.join(out, "case000_vdc.csv")).read().strip().split("\n")[1:]
    assert len(rows) == 100
    assert all(row.endswith(",true") for row in rows)
    summary = json.loads(open(os.path.join(out, "summary.json")).read())
    assert summary["passed"] == 1 and summary["failed"] == 0
    assert summary["schema_version"] == "1"


def test_global_seed_fallback(tmp_path):
    cfg = write_config(tmp_path, {"kind": "vdc", "draws": 5, "max_n": 32})
    out = str(tmp_path / "o1")
    assert main(["--out", out, "--seed", "42", "run", cfg]) == 0
    assert main(["--out", str(tmp_path / "o2"), "run", cfg]) == 2  # no seed anywhere


def test_run_outputs_byte_identical_across_threads(tmp_path):
    cases = {
        "cases": [
            {"kind": "vdc", "draws": 25, "max_n": 96, "seed": 11},
            BASE_AVERAGE,
            {"kind": "assani", "draws": 10, "max_n": 32, "seed": 12},
            {"kind": "gowers", "count": 4, "ps": [5, 7], "k": 2, "seed": 13},
            {"kind": "selfjoining",
             "system": {"variant": "finite_permutation", "perm": [1, 0]},
             "exponents": [1, 2], "sets": [[0], [0]], "mode": "exact"},
            {"kind": "selfjoining",
             "system": {"variant": "finite_permutation", "perm": [1, 2, 0]},
             "exponents": [1, -1], "sets": [[0, 1], [2]], "mode": "mc",
             "N": 12, "samples": 64, "seed": 14},
            {"kind": "cubic_estimate", "k": 3, "draws": 4, "max_n": 8, "seed": 15},
            {"kind": "sup", "weight": {"variant": "poly", "theta": 0.31},
             "offset": 0, "length": 12, "oversample": 8},
            {"kind": "local_seminorm", "values": [1, -1] * 8, "k": 2, "H": 3, "N": 4},
            {"kind": "hk", "system": {"variant": "finite_permutation", "perm": [2, 0, 1]},
             "x": "integrate", "observable": {"variant": "table", "table": [1, 0, -1]},
             "k": 2, "H": 3, "N": 3},
            {"kind": "seq_corr", "weight": {"variant": "trig", "t": 0.2},
             "offset": 0, "length": 20, "shifts": [0, 2], "schedule": [4, 16]},
            {"kind": "lemma33",
             "system": {"variant": "finite_permutation", "perm": [1, 2, 0]},
             "observables": [{"variant": "indicator", "subset": [0, 2]}],
             "exponents": [1], "N": 3, "samples": 9},
            {"kind": "average",
             "system": {"variant": "heisenberg", "heis_a": [0.21, 0.4, 0.13]},
             "x": [0.0, 0.0, 0.0],
             "observables": [{"variant": "heisenberg_vertical"}],
             "exponents": [1],
             "weight": {"variant": "product", "factors": [
                 {"variant": "trig", "t": 0.11},
                 {"variant": "shift", "inner": {"variant": "conjugate",
                  "inner": {"variant": "trig", "t": 0.4}}, "shift_m": 2}]},
             "schedule": [8, 32, 128]},
        ]
    }
    cfg = write_config(tmp_path, cases)
    blobs = []
    for threads in (1, 2, 8):
        out = str(tmp_path / f"out_t{threads}")
        assert main(["--out", out, "--threads", str(threads), "run", cfg]) == 0
        blobs.append(read_all_bytes(out))
    assert blobs[0] == blobs[1] == blobs[2]


def test_sup_kind_from_weight_window(tmp_path):
    cfg = write_config(tmp_path, {
        "kind": "sup",
        "weight": {"variant": "trig", "t": 0.25},
        "offset": 0,
        "length": 8,
        "oversample": 8,
        "normalizer": 4,
    })
    out = str(tmp_path / "out")
    assert main(["--out", out, "run", cfg]) == 0
    rep = json.loads(open(os.path.join(out, "case000_sup.json")).read())
    assert rep["gridMax"] == pytest.approx(2.0)  # 8 aligned phases / 4
    assert rep["argmaxT"] == pytest.approx(0.75)  # resonance at t = -1/4 mod 1
    assert rep["certifiedUpper"] >= rep["gridMax"]
    assert rep["gridSize"] == 64


def test_average_schedule_defaults_to_dyadic_plus_period(tmp_path):
    cfg = dict(BASE_AVERAGE)
    del cfg["schedule"]
    out = str(tmp_path / "out")
    assert main(["--out", out, "run", write_config(tmp_path, cfg)]) == 0
    rows = open(os.path.join(out, "case000_average.csv")).read().strip().split("\n")[1:]
    ns = [int(r.split(",")[0]) for r in rows]
    assert 1 in ns and 4096 in ns and 3 in ns  # dyadic range plus the period


def test_suite_convergence_passes(tmp_path):
    out = str(tmp_path / "suite")
    assert main(["--out", out, "suite", "convergence"]) == 0
    summary = json.loads(open(os.path.join(out, "summary.json")).read())
    assert summary["failed"] == 0
    assert summary["passed"] == len(summary["cases"])


def test_unknown_suite_exits_2(tmp_path, capsys):
    assert main(["--out", str(tmp_path / "s"), "suite", "nope"]) == 2
    assert "nope" in capsys.readouterr().err


def test_budget_resolution(monkeypatch):
    from ergolab.budget import DEFAULT_BUDGET, resolve_budget

    monkeypatch.delenv("ERGOLAB_BUDGET", raising=False)
    assert resolve_budget(None) == DEFAULT_BUDGET
    assert resolve_budget(123) == 123
    monkeypatch.setenv("ERGOLAB_BUDGET", "5000")
    assert resolve_budget(None) == 5000
    assert resolve_budget(777) == 777
