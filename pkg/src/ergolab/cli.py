"""Config-driven experiment runner and verification harness.

Usage:
    ergolab run <config.json> [--out DIR] [--threads N] [--budget TERMS] [--seed U64]
    ergolab suite <inequalities|oracles|convergence> [--out DIR] [--threads N] [--budget TERMS]

A config is one case object or {"cases": [...]}; every case carries a
"kind" discriminator.  Cases are validated up front (schema violations
report the offending field path and exit 2), then executed, possibly in
parallel; outputs are written atomically per case and the summary is
assembled in input order, so artifacts are byte-identical for any thread
count.

Exit status: 0 all verdicts pass, 1 some verdict false, 2 config error,
3 budget error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import batteries, dynsys, joinings, nilseq, uniformity
from .averaging import multilinear_average, sup_trig
from .budget import resolve_budget
from .errors import BudgetError, ConfigError, ErgolabError, ExactRangeError, WindowError
from .reporting import write_csv, write_json
from .suites import SUITES, suite_cases
from .windows import SequenceWindow, default_schedule

KINDS = (
    "average", "sup", "vdc", "assani", "cubic_estimate", "gowers",
    "local_seminorm", "hk", "selfjoining", "seq_corr", "lemma33",
)


# ---------------------------------------------------------------------------
# config parsing (field paths in every error)
# ---------------------------------------------------------------------------

def _need(obj, key, path):
    if not isinstance(obj, dict):
        raise ConfigError(f"{path}: expected an object")
    if key not in obj:
        raise ConfigError(f'{path}: missing required field "{key}"')
    return obj[key]


def _opt(obj, key, default=None):
    return obj.get(key, default) if isinstance(obj, dict) else default


def parse_complex(v, path) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, list) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    raise ConfigError(f"{path}: expected a number or [re, im]")


def parse_system(obj, path):
    variant = _need(obj, "variant", path)
    if variant == "finite_permutation":
        return dynsys.FinitePermutation(_need(obj, "perm", path))
    if variant == "torus_rotation":
        alpha = _need(obj, "alpha", path)
        return dynsys.TorusRotation(tuple(alpha) if isinstance(alpha, list) else (alpha,))
    if variant == "skew_product":
        return dynsys.SkewProduct(_need(obj, "alpha", path))
    if variant == "heisenberg":
        return dynsys.HeisenbergTranslation(tuple(_need(obj, "heis_a", path)))
    raise ConfigError(f"{path}.variant: unknown system variant {variant!r}")


def parse_observable(obj, path):
    variant = _need(obj, "variant", path)
    if variant == "character":
        m = _need(obj, "character_m", path)
        return dynsys.Character(tuple(m) if isinstance(m, list) else int(m))
    if variant == "indicator":
        return dynsys.Indicator(set(_need(obj, "subset", path)))
    if variant == "table":
        vals = [parse_complex(v, f"{path}.table") for v in _need(obj, "table", path)]
        return dynsys.Table(np.array(vals))
    if variant == "heisenberg_vertical":
        return dynsys.HeisenbergVertical()
    raise ConfigError(f"{path}.variant: unknown observable variant {variant!r}")


def parse_weight(obj, path):
    variant = _need(obj, "variant", path)
    if variant == "trig":
        return nilseq.TrigPhase(_need(obj, "t", path))
    if variant == "poly":
        return nilseq.PolyPhase(_need(obj, "theta", path), int(_opt(obj, "degree", 2)))
    if variant == "heisenberg":
        return nilseq.HeisenbergBasic(
            tuple(_need(obj, "heis_a", path)),
            tuple(_opt(obj, "x", (0.0, 0.0, 0.0))),
        )
    if variant == "product":
        factors = _need(obj, "factors", path)
        return nilseq.Product(tuple(
            parse_weight(f, f"{path}.factors[{i}]") for i, f in enumerate(factors)
        ))
    if variant == "shift":
        return nilseq.Shift(
            parse_weight(_need(obj, "inner", path), f"{path}.inner"),
            int(_need(obj, "shift_m", path)),
        )
    if variant == "conjugate":
        return nilseq.Conjugate(parse_weight(_need(obj, "inner", path), f"{path}.inner"))
    if variant == "constant":
        return nilseq.Constant(parse_complex(_need(obj, "c", path), f"{path}.c"))
    raise ConfigError(f"{path}.variant: unknown weight variant {variant!r}")


def parse_state(v, path):
    if isinstance(v, (int, float)):
        return v if isinstance(v, int) else (float(v),)
    if isinstance(v, list):
        return tuple(float(c) for c in v)
    if v == "integrate":
        return "integrate"
    raise ConfigError(f"{path}: expected an integer, coordinate list, or \"integrate\"")


def parse_window(case, path) -> SequenceWindow:
    """Window from explicit "values" or from a "weight" spec plus range."""
    offset = int(_opt(case, "offset", 0))
    if "values" in case:
        vals = [parse_complex(v, f"{path}.values") for v in case["values"]]
        bound = _opt(case, "bound")
        bound = float(np.max(np.abs(vals))) if bound is None else float(bound)
        return SequenceWindow(offset, np.array(vals), bound)
    if "weight" in case:
        w = parse_weight(case["weight"], f"{path}.weight")
        length = int(_need(case, "length", path))
        return nilseq.weight_window(w, offset, length)
    raise ConfigError(f'{path}: needs either "values" or "weight" to define a window')


def _case_seed(case, path, default_seed):
    seed = _opt(case, "seed", default_seed)
    if seed is None:
        raise ConfigError(f'{path}: missing required field "seed" (or pass --seed)')
    return int(seed)


# ---------------------------------------------------------------------------
# kind handlers: parse eagerly, return a runner closure
# ---------------------------------------------------------------------------

def _series_rows(series):
    rows = []
    for j, n in enumerate(series.schedule):
        tail = series.cauchy_tail[j - 1] if j > 0 else None
        rows.append((n, series.averages[j].real, series.averages[j].imag, tail))
    return rows


def _prep_average(case, path, budget, default_seed):
    sys = parse_system(_need(case, "system", path), f"{path}.system")
    x = parse_state(_need(case, "x", path), f"{path}.x")
    observables = [
        parse_observable(o, f"{path}.observables[{i}]")
        for i, o in enumerate(_need(case, "observables", path))
    ]
    exponents = _need(case, "exponents", path)
    weight = None
    if _opt(case, "weight") is not None:
        weight = parse_weight(case["weight"], f"{path}.weight")
    schedule = _opt(case, "schedule")
    if schedule is None:
        schedule = default_schedule(dynsys.system_period(sys))

    def run(prefix):
        series = multilinear_average(sys, x, observables, exponents, weight, schedule)
        csv = f"{prefix}.csv"
        write_csv(csv, ["N", "re", "im", "cauchy_tail"], _series_rows(series))
        return None, [csv]

    return run


def _prep_sup(case, path, budget, default_seed):
    win = parse_window(case, path)
    oversample = int(_opt(case, "oversample", 8))
    normalizer = float(_opt(case, "normalizer", 1.0))

    def run(prefix):
        sup = sup_trig(win, oversample, normalizer)
        out = f"{prefix}.json"
        write_json(out, {
            "gridMax": sup.grid_max,
            "certifiedUpper": sup.certified_upper,
            "argmaxT": sup.argmax_t,
            "gridSize": sup.grid_size,
        })
        return None, [out]

    return run


def _battery_runner(battery_fn):
    def run(prefix):
        result = battery_fn()
        csv, js = f"{prefix}.csv", f"{prefix}.json"
        write_csv(csv, result.header, result.rows)
        write_json(js, {"verdict": result.verdict, **result.summary})
        return result.verdict, [csv, js]

    return run


def _prep_vdc(case, path, budget, default_seed):
    draws = int(_need(case, "draws", path))
    max_n = int(_opt(case, "max_n", 512))
    seed = _case_seed(case, path, default_seed)
    return _battery_runner(lambda: batteries.vdc_battery(draws, max_n, seed))


def _prep_assani(case, path, budget, default_seed):
    draws = int(_need(case, "draws", path))
    max_n = int(_opt(case, "max_n", 128))
    seed = _case_seed(case, path, default_seed)
    oversample = int(_opt(case, "oversample", 8))
    return _battery_runner(lambda: batteries.assani_battery(draws, max_n, seed, oversample))


def _prep_cubic(case, path, budget, default_seed):
    k = int(_need(case, "k", path))
    draws = int(_need(case, "draws", path))
    max_n = int(_opt(case, "max_n", 16 if k == 3 else 8))
    seed = _case_seed(case, path, default_seed)
    oversample = int(_opt(case, "oversample", 8))
    return _battery_runner(
        lambda: batteries.cubic_battery(k, draws, max_n, seed, oversample, budget=budget)
    )


def _prep_gowers(case, path, budget, default_seed):
    k_max = int(_opt(case, "k", 3))
    if "f" in case:
        vals = np.array([parse_complex(v, f"{path}.f") for v in case["f"]])

        def run(prefix):
            norms = [uniformity.gowers_norm_cyclic(vals, k, budget=budget)
                     for k in range(1, k_max + 2)]
            fourier_err = abs(norms[1] ** 4 - uniformity.fourier_u2_power(vals))
            mono = all(norms[j] <= norms[j + 1] + 1e-9 for j in range(k_max))
            out = f"{prefix}.json"
            write_json(out, {
                "p": len(vals),
                "norms": norms,
                "monotone_ok": mono,
                "fourier_err": fourier_err,
                "fourier_ok": fourier_err <= 1e-9,
            })
            return mono and fourier_err <= 1e-9, [out]

        return run
    ps = tuple(_opt(case, "ps", (5, 7, 11, 13)))
    count = int(_need(case, "count", path))
    seed = _case_seed(case, path, default_seed)
    return _battery_runner(
        lambda: batteries.gowers_battery(ps, count, k_max, seed, budget=budget)
    )


def _prep_local_seminorm(case, path, budget, default_seed):
    win = parse_window(case, path)
    k = int(_need(case, "k", path))
    H = int(_need(case, "H", path))
    N = int(_need(case, "N", path))

    def run(prefix):
        report = uniformity.local_seminorm(win, k, H, N, budget=budget)
        table = uniformity.correlation_table(win, k, H, N, budget=budget)
        csv, js = f"{prefix}.csv", f"{prefix}.json"
        rows = []
        flat = table.entries.reshape(-1)
        for t, hs in enumerate(np.ndindex(*(H,) * k)):
            rows.append((*hs, flat[t].real, flat[t].imag))
        write_csv(csv, [f"h{i + 1}" for i in range(k)] + ["re", "im"], rows)
        write_json(js, {
            "value": report.value,
            "mean_re": report.mean.real,
            "mean_im": report.mean.imag,
            "clamped": report.clamped,
            "k": k, "H": H, "N": N,
        })
        return None, [csv, js]

    return run


def _prep_hk(case, path, budget, default_seed):
    sys = parse_system(_need(case, "system", path), f"{path}.system")
    x = parse_state(_need(case, "x", path), f"{path}.x")
    obs = parse_observable(_need(case, "observable", path), f"{path}.observable")
    k = int(_need(case, "k", path))
    H = int(_need(case, "H", path))
    N = int(_need(case, "N", path))

    def run(prefix):
        value = uniformity.hk_seminorm_estimate(sys, x, obs, k, H, N, budget=budget)
        out = f"{prefix}.json"
        write_json(out, {"value": value, "k": k, "H": H, "N": N})
        return None, [out]

    return run


def _prep_selfjoining(case, path, budget, default_seed):
    sys = parse_system(_need(case, "system", path), f"{path}.system")
    exponents = tuple(_need(case, "exponents", path))
    sets = _need(case, "sets", path)
    observables = tuple(dynsys.Indicator(set(s)) for s in sets)
    mode = _opt(case, "mode", "exact")
    if mode == "exact":
        query = joinings.JoiningQuery(exponents, observables)
        seed = None
        samples = None
    elif mode == "mc":
        query = joinings.JoiningQuery(exponents, observables, length=int(_need(case, "N", path)))
        samples = int(_need(case, "samples", path))
        seed = _case_seed(case, path, default_seed)
    else:
        raise ConfigError(f'{path}.mode: expected "exact" or "mc", got {mode!r}')

    def run(prefix):
        rep = joinings.selfjoining_correlation(sys, query, samples or 0, seed, budget=budget)
        out = f"{prefix}.json"
        write_json(out, {
            "value": rep.value, "mode": rep.mode, "stderr": rep.stderr,
            "N": rep.N, "samples": rep.samples, "seed": seed,
        })
        return None, [out]

    return run


def _prep_seq_corr(case, path, budget, default_seed):
    win = parse_window(case, path)
    shifts = tuple(_need(case, "shifts", path))
    schedule = _need(case, "schedule", path)

    def run(prefix):
        rep = joinings.sequence_correlation(win, shifts, schedule)
        csv, js = f"{prefix}.csv", f"{prefix}.json"
        write_csv(csv, ["N", "re", "im", "cauchy_tail"], _series_rows(rep.series))
        write_json(js, {
            "shifts": list(shifts),
            "value_re": rep.value.real,
            "value_im": rep.value.imag,
            "n_used": rep.n_used,
        })
        return None, [csv, js]

    return run


def _prep_lemma33(case, path, budget, default_seed):
    sys = parse_system(_need(case, "system", path), f"{path}.system")
    observables = [
        parse_observable(o, f"{path}.observables[{i}]")
        for i, o in enumerate(_need(case, "observables", path))
    ]
    exponents = _need(case, "exponents", path)
    N = int(_need(case, "N", path))
    samples = int(_need(case, "samples", path))
    seed = _opt(case, "seed", default_seed)

    def run(prefix):
        rep = joinings.multivariable_estimate_report(
            sys, observables, exponents, N, samples,
            seed=None if seed is None else int(seed), budget=budget,
        )
        out = f"{prefix}.json"
        write_json(out, {
            "lhs_surrogate": rep.lhs_surrogate,
            "min_seminorm": rep.min_seminorm,
            "ratio": rep.ratio,
            "N": rep.N, "samples": rep.samples, "stderr": rep.stderr,
        })
        return None, [out]

    return run


HANDLERS = {
    "average": _prep_average,
    "sup": _prep_sup,
    "vdc": _prep_vdc,
    "assani": _prep_assani,
    "cubic_estimate": _prep_cubic,
    "gowers": _prep_gowers,
    "local_seminorm": _prep_local_seminorm,
    "hk": _prep_hk,
    "selfjoining": _prep_selfjoining,
    "seq_corr": _prep_seq_corr,
    "lemma33": _prep_lemma33,
}


# ---------------------------------------------------------------------------
# execution
# ---------------------------------------------------------------------------

@dataclass
class CaseResult:
    name: str
    kind: str
    verdict: object  # True / False / None
    files: list
    error: str = None
    error_class: str = None


def _execute(jobs, threads: int):
    """jobs: list of (name, kind, runner(prefix) -> (verdict, files), prefix)."""

    def work(job):
        name, kind, runner, prefix = job
        try:
            verdict, files = runner(prefix)
            return CaseResult(name, kind, verdict, [os.path.basename(f) for f in files])
        except BudgetError as exc:
            return CaseResult(name, kind, None, [], error=str(exc), error_class="budget")
        except (ConfigError, WindowError, ExactRangeError) as exc:
            return CaseResult(name, kind, None, [], error=str(exc), error_class="config")

    if threads <= 1:
        return [work(j) for j in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(work, jobs))


def _summarize(results, out_dir: str) -> int:
    passed = sum(1 for r in results if r.verdict is True)
    failed = sum(1 for r in results if r.verdict is False)
    skipped = sum(1 for r in results if r.verdict is None and r.error is None)
    write_json(os.path.join(out_dir, "summary.json"), {
        "passed": passed,
        "failed": failed,
        "skipped": skipped,
        "cases": [
            {
                "name": r.name, "kind": r.kind, "verdict": r.verdict,
                "files": r.files, "error": r.error,
            }
            for r in results
        ],
    })
    if any(r.error_class == "budget" for r in results):
        return 3
    if any(r.error_class == "config" for r in results):
        return 2
    return 1 if failed else 0


def cmd_run(config_path: str, out_dir: str, threads: int, budget, default_seed) -> int:
    try:
        with open(config_path, "r", encoding="utf-8") as fh:
            config = json.load(fh)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"error: config is not valid JSON: {exc}", file=sys.stderr)
        return 2
    cases = config["cases"] if isinstance(config, dict) and "cases" in config else [config]
    os.makedirs(out_dir, exist_ok=True)
    jobs = []
    try:
        for i, case in enumerate(cases):
            path = f"cases[{i}]"
            kind = _need(case, "kind", path)
            if kind not in KINDS:
                raise ConfigError(f"{path}.kind: unknown kind {kind!r}")
            runner = HANDLERS[kind](case, path, budget, default_seed)
            name = _opt(case, "name", f"case{i:03d}")
            prefix = os.path.join(out_dir, f"case{i:03d}_{kind}")
            jobs.append((name, kind, runner, prefix))
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    results = _execute(jobs, threads)
    code = _summarize(results, out_dir)
    for r in results:
        status = {True: "pass", False: "FAIL", None: "-"}[r.verdict]
        line = f"[{status}] {r.kind}: {r.name}"
        if r.error:
            line += f" ({r.error_class} error: {r.error})"
        print(line)
    return code


def cmd_suite(name: str, out_dir: str, threads: int, budget) -> int:
    if name not in SUITES:
        print(f"error: unknown suite {name!r}; choose from {sorted(SUITES)}", file=sys.stderr)
        return 2
    cases = suite_cases(name)
    os.makedirs(out_dir, exist_ok=True)
    jobs = []
    for i, (case_name, fn) in enumerate(cases):
        def runner(prefix, fn=fn):
            result = fn(budget)
            csv, js = f"{prefix}.csv", f"{prefix}.json"
            write_csv(csv, result.header, result.rows)
            write_json(js, {"verdict": result.verdict, **result.summary})
            return result.verdict, [csv, js]

        prefix = os.path.join(out_dir, f"{i:02d}_{case_name}")
        jobs.append((case_name, name, runner, prefix))
    results = _execute(jobs, threads)
    code = _summarize(results, out_dir)
    for r in results:
        status = {True: "pass", False: "FAIL", None: "-"}[r.verdict]
        line = f"[{status}] {r.name}"
        if r.error:
            line += f" ({r.error_class} error: {r.error})"
        print(line)
    return code


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ergolab",
        description="Numerical laboratory for multilinear weighted ergodic averages",
    )
    parser.add_argument("--out", default="ergolab_out", help="output directory")
    parser.add_argument("--threads", type=int, default=1, help="parallel case workers")
    parser.add_argument("--budget", type=int, default=None,
                        help="elementary-product cap (also env ERGOLAB_BUDGET)")
    parser.add_argument("--seed", type=int, default=None,
                        help="default seed for cases that do not carry one")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run a JSON experiment config")
    p_run.add_argument("config")
    p_suite = sub.add_parser("suite", help="run a named verification suite")
    p_suite.add_argument("name")
    args = parser.parse_args(argv)

    budget = resolve_budget(args.budget)
    try:
        if args.command == "run":
            return cmd_run(args.config, args.out, args.threads, budget, args.seed)
        return cmd_suite(args.name, args.out, args.threads, budget)
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ErgolabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
