"""Throughput comparison of the greedy dispatch kernels.

Runs the same workload (full-size reference day, random hiring vectors) on
the compiled extension and the pure-Python fallback, and reports per-call
latency and the end-to-end cost of one tabu-search fitness sweep.

    python benchmarks/bench_backends.py [--scenarios N] [--repeats K]
"""
from __future__ import annotations

import argparse
import importlib
import time

import numpy as np

from interpsched import _kernel_py
from interpsched.arrays import build_instance_view, build_scenario_view
from interpsched.basecase import make_base_instance
from interpsched.domain import group_part_timers
from interpsched.scenarios import sample_batch


def load_compiled():
    try:
        return importlib.import_module("interpsched._kernel")
    except ImportError:
        return None


def bench(mod, view, hired, scenario_views, repeats):
    calls = 0
    start = time.perf_counter()
    for _ in range(repeats):
        for sv in scenario_views:
            n = len(sv.patient_ids)
            out_i = np.empty(n, dtype=np.int32)
            out_s = np.empty(n, dtype=np.int32)
            mod.greedy_assign(
                view.horizon,
                view.alpha_horizon,
                view.n_full_time,
                view.lang_mask,
                view.avail,
                view.span_end,
                view.regular_time,
                view.overtime_rate,
                view.covered_threshold,
                view.variable_rate,
                hired,
                sv.arrival,
                sv.duration,
                sv.penalty,
                sv.lang_mask,
                sv.tie_rank,
                0,
                out_i,
                out_s,
            )
            calls += 1
    return (time.perf_counter() - start) / calls


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--scenarios", type=int, default=50)
    parser.add_argument("--repeats", type=int, default=20)
    args = parser.parse_args()

    instance = make_base_instance()
    view = build_instance_view(instance)
    template = group_part_timers(instance)
    batch = sample_batch(instance, args.scenarios, 0)
    scenario_views = [build_scenario_view(view, instance, s) for s in batch]
    rng = np.random.default_rng(0)
    hired = view.hired_vector(template.with_bits(tuple(bool(b) for b in rng.integers(0, 2, len(template.bits)))))

    # one tabu-search run evaluates iterations x neighborhood x sample_size
    ts_calls = 100 * 20 * args.scenarios

    compiled = load_compiled()
    results = {}
    if compiled is not None:
        results["compiled"] = bench(compiled, view, hired, scenario_views, args.repeats)
    results["python"] = bench(_kernel_py, view, hired, scenario_views, max(1, args.repeats // 10))

    print(f"workload: reference day, {args.scenarios} scenarios per sweep")
    for name, per_call in results.items():
        print(
            f"  {name:9s} {per_call * 1e6:9.1f} us/call   "
            f"-> one tabu run (~{ts_calls} calls): {per_call * ts_calls:7.1f} s"
        )
    if compiled is not None:
        print(f"  speedup: {results['python'] / results['compiled']:.1f}x")
    else:
        print("  compiled kernel not built; rerun `pip install -e . --no-build-isolation`")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
