"""Command-line surface: instance generation, solving, evaluation, reporting.

Exit codes: 0 success, 1 validation error, 2 desk-scale guard refusal.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .basecase import BASE_SEED, make_base_instance
from .costing import check_constraints
from .domain import HiringDecision, ProblemInstance, simplify_instance
from .exact import DEFAULT_MAX_PART_TIMERS, DEFAULT_MAX_PATIENTS, SizeGuardExceeded, solve_saa_exact
from .fileio import (
    FormatError,
    dumps,
    instance_document,
    instance_from_document,
    saa_report_document,
    scenarios_document,
    scenarios_from_document,
    solution_document,
    solution_from_document,
    stats_csv_cells,
    STATS_CSV_COLUMNS,
)
from .fixtures import make_t1
from .greedy import construct_schedule
from .saa import run_saa
from .scenarios import sample_batch
from .simulate import ScaledParameter, SimulationStats, sensitivity_sweep, simulate, solve_evp
from .tabu import TsParams, run_ts, trace_csv

QUICK_TS = dict(iterations=10, fitness_sample_size=10, init_sample_size=2)
QUICK_SIM = 50


def _load_instance(path: str) -> ProblemInstance:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            doc = json.load(handle)
    except FileNotFoundError:
        raise FormatError(f"instance file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise FormatError(f"instance: not valid JSON ({exc})") from None
    return simplify_instance(instance_from_document(doc))


def _load_scenarios(path: str):
    with open(path, "r", encoding="utf-8") as handle:
        return scenarios_from_document(json.load(handle))


def _load_solution(path: str, instance: ProblemInstance) -> HiringDecision:
    with open(path, "r", encoding="utf-8") as handle:
        return solution_from_document(json.load(handle), instance)


def _write(out_dir: str, name: str, content: str) -> Path:
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    target = directory / name
    target.write_text(content, encoding="utf-8")
    print(target)
    return target


def _ts_params(args: argparse.Namespace) -> TsParams:
    return TsParams(
        iterations=args.iterations,
        tabu_length=args.tabu_len,
        diversification_prob=args.div_prob,
        neighborhood_size=args.neighbors,
        fitness_sample_size=args.fitness_scenarios,
        init_sample_size=args.init_scenarios,
        master_seed=args.seed,
        policy=args.policy,
    )


def _add_ts_flags(parser: argparse.ArgumentParser, quick: bool = False) -> None:
    defaults = TsParams()
    parser.add_argument("--iterations", type=int, default=defaults.iterations)
    parser.add_argument("--tabu-len", type=int, default=defaults.tabu_length)
    parser.add_argument("--div-prob", type=float, default=defaults.diversification_prob)
    parser.add_argument("--neighbors", type=int, default=defaults.neighborhood_size)
    parser.add_argument("--fitness-scenarios", type=int, default=defaults.fitness_sample_size)
    parser.add_argument("--init-scenarios", type=int, default=defaults.init_sample_size)
    parser.add_argument("--policy", default=defaults.policy, choices=("max_accrued", "min_accrued"))


def cmd_gen_instance(args) -> int:
    if args.t1:
        instance, name = make_t1(), "t1.json"
    else:
        instance, name = make_base_instance(args.seed), "base_case.json"
    _write(args.out, name, dumps(instance_document(instance)))
    return 0


def cmd_gen_scenarios(args) -> int:
    instance = _load_instance(args.instance)
    batch = sample_batch(instance, args.samples, args.seed)
    _write(args.out, "scenarios.json", dumps(scenarios_document(batch, master_seed=args.seed)))
    return 0


def cmd_solve_exact(args) -> int:
    instance = _load_instance(args.instance)
    if args.scenarios:
        batch = _load_scenarios(args.scenarios)
    else:
        batch = sample_batch(instance, args.samples, args.seed)
    decision, objective = solve_saa_exact(
        instance, batch, max_patients=args.max_patients, max_part_timers=args.max_parttimers
    )
    _write(args.out, "solution.json", dumps(solution_document(decision, "exact", objective, args.seed)))
    return 0


def cmd_solve_ts(args) -> int:
    instance = _load_instance(args.instance)
    result = run_ts(instance, _ts_params(args))
    _write(args.out, "solution.json", dumps(solution_document(result.decision, "ts", result.best_fitness, args.seed)))
    _write(args.out, "trace.csv", trace_csv(result.trace))
    return 0


def cmd_solve_evp(args) -> int:
    instance = _load_instance(args.instance)
    decision = solve_evp(instance, master_seed=args.seed)
    _write(args.out, "solution.json", dumps(solution_document(decision, "evp", None, args.seed)))
    return 0


def cmd_solve_saa(args) -> int:
    instance = _load_instance(args.instance)
    report = run_saa(
        instance,
        num_scenarios=args.samples,
        num_replications=args.replications,
        eval_scenarios=args.eval_samples,
        confidence=args.confidence,
        master_seed=args.seed,
        inner_solver=args.inner,
    )
    _write(args.out, "saa_report.json", dumps(saa_report_document(report)))
    _write(args.out, "saa_summary.csv", report.summary_csv())
    _write(
        args.out,
        "solution.json",
        dumps(solution_document(report.best_decision, "saa", report.upper_bound, args.seed)),
    )
    return 0


def cmd_evaluate(args) -> int:
    instance = _load_instance(args.instance)
    decision = _load_solution(args.solution, instance)
    stats = simulate(instance, decision, args.samples, master_seed=args.seed, scheduler=args.scheduler)
    _write(args.out, "evaluation.json", dumps(_stats_document(stats)))
    return 0


def _stats_document(stats: SimulationStats) -> dict:
    fixed, variable, overtime, penalty = stats.cost_breakdown_means
    return {
        "schema_version": 1,
        "mean_total": stats.mean_total,
        "std_total": stats.std_total,
        "mean_wait": stats.mean_wait,
        "service_level_emergency": stats.service_level_emergency,
        "service_level_outpatient": stats.service_level_outpatient,
        "mean_fixed": fixed,
        "mean_variable": variable,
        "mean_overtime": overtime,
        "mean_penalty": penalty,
        "hired_count_per_language_set": dict(sorted(stats.hired_count_per_language_set.items())),
    }


def cmd_compare(args) -> int:
    instance = _load_instance(args.instance)
    samples = QUICK_SIM if args.quick else args.samples
    ts_params = _ts_params(args)
    if args.quick:
        ts_params = TsParams(
            iterations=QUICK_TS["iterations"],
            fitness_sample_size=QUICK_TS["fitness_sample_size"],
            init_sample_size=QUICK_TS["init_sample_size"],
            master_seed=args.seed,
        )
    evp_decision = solve_evp(instance, master_seed=args.seed, ts_params=ts_params)
    ts_decision = run_ts(instance, ts_params).decision
    lines = ["solution," + ",".join(STATS_CSV_COLUMNS)]
    for name, decision in (("evp", evp_decision), ("ts", ts_decision)):
        stats = simulate(instance, decision, samples, master_seed=args.seed)
        lines.append(name + "," + ",".join(stats_csv_cells(stats)))
    _write(args.out, "comparison.csv", "\n".join(lines) + "\n")
    return 0


def cmd_sensitivity(args) -> int:
    instance = _load_instance(args.instance)
    parameter = ScaledParameter(args.parameter)
    ts_params = TsParams(master_seed=args.seed)
    n_sim = args.samples
    if args.quick:
        ts_params = TsParams(master_seed=args.seed, **QUICK_TS)
        n_sim = QUICK_SIM
    rows = sensitivity_sweep(instance, parameter, ts_params=ts_params, n_sim=n_sim, master_seed=args.seed)
    group_labels = sorted(rows[0].stats.hired_count_per_language_set)
    header = (
        "experiment,factor,"
        + ",".join(STATS_CSV_COLUMNS)
        + ",hired_total,"
        + ",".join(f"hired[{label}]" for label in group_labels)
    )
    lines = [header]
    for row in rows:
        counts = row.stats.hired_count_per_language_set
        lines.append(
            f"{row.experiment},{row.factor!r},"
            + ",".join(stats_csv_cells(row.stats))
            + f",{row.hiring.hired_count()},"
            + ",".join(str(counts[label]) for label in group_labels)
        )
    _write(args.out, f"sensitivity_{parameter.value}.csv", "\n".join(lines) + "\n")
    return 0


def cmd_check(args) -> int:
    # per-scenario constraint families; the batch-level hired-unused audit is
    # a property of the hiring decision, not of any schedule, and is left to
    # the library surface (check_constraints_batch)
    instance = _load_instance(args.instance)
    decision = _load_solution(args.solution, instance)
    if args.scenarios:
        batch = _load_scenarios(args.scenarios)
    else:
        batch = sample_batch(instance, args.samples, args.seed)
    violations = []
    for index, scenario in enumerate(batch):
        schedule = construct_schedule(instance, decision, scenario)
        violations.extend(check_constraints(instance, decision, scenario, schedule, index))
    lines = ["family,scenario_index,ids"]
    for violation in violations:
        family, index, ids = violation.csv_row()
        lines.append(f"{family},{index},{ids}")
    _write(args.out, "violations.csv", "\n".join(lines) + "\n")
    if violations:
        print(f"{len(violations)} violation(s) found", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="interpsched", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, instance: bool = True) -> None:
        if instance:
            p.add_argument("--instance", required=True, help="instance JSON file")
        p.add_argument("--seed", type=int, default=0, help="master seed")
        p.add_argument("--out", default=".", help="output directory")

    p = sub.add_parser("gen-instance", help="write a generated instance file")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--base", action="store_true", help="full-size reference day (default)")
    group.add_argument("--t1", action="store_true", help="tiny deterministic fixture")
    common(p, instance=False)
    p.set_defaults(func=cmd_gen_instance, seed=BASE_SEED)

    p = sub.add_parser("gen-scenarios", help="sample and persist a scenario batch")
    p.add_argument("--samples", type=int, default=100)
    common(p)
    p.set_defaults(func=cmd_gen_scenarios)

    p = sub.add_parser("solve-exact", help="desk-scale exact solve of a sampled problem")
    p.add_argument("--scenarios", help="stored scenario batch (else sampled)")
    p.add_argument("--samples", type=int, default=2)
    p.add_argument("--max-patients", type=int, default=DEFAULT_MAX_PATIENTS)
    p.add_argument("--max-parttimers", type=int, default=DEFAULT_MAX_PART_TIMERS)
    common(p)
    p.set_defaults(func=cmd_solve_exact)

    p = sub.add_parser("solve-ts", help="tabu search over hiring vectors")
    _add_ts_flags(p)
    common(p)
    p.set_defaults(func=cmd_solve_ts)

    p = sub.add_parser("solve-evp", help="expected-value baseline decision")
    common(p)
    p.set_defaults(func=cmd_solve_evp)

    p = sub.add_parser("solve-saa", help="replication driver with gap bounds")
    p.add_argument("--samples", type=int, default=5, help="scenarios per replication (S)")
    p.add_argument("--replications", type=int, default=5, help="number of replications (M)")
    p.add_argument("--eval-samples", type=int, default=500, help="evaluation sample size (S')")
    p.add_argument("--confidence", type=float, default=0.95)
    p.add_argument("--inner", choices=("exact", "ts"), default="exact")
    common(p)
    p.set_defaults(func=cmd_solve_saa)

    p = sub.add_parser("evaluate", help="simulate a stored solution")
    p.add_argument("--solution", required=True)
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--scheduler", choices=("greedy", "exact"), default="greedy")
    common(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("compare", help="stochastic vs expected-value comparison CSV")
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--quick", action="store_true", help="reduced search and sample sizes")
    _add_ts_flags(p)
    common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sensitivity", help="one-parameter sweep CSV")
    p.add_argument("--parameter", required=True, choices=[sp.value for sp in ScaledParameter])
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--quick", action="store_true", help="reduced search and sample sizes")
    common(p)
    p.set_defaults(func=cmd_sensitivity)

    p = sub.add_parser("check", help="constraint-check a stored solution")
    p.add_argument("--solution", required=True)
    p.add_argument("--scenarios", help="stored scenario batch (else sampled)")
    p.add_argument("--samples", type=int, default=100)
    common(p)
    p.set_defaults(func=cmd_check)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SizeGuardExceeded as exc:
        print(f"size guard: {exc}", file=sys.stderr)
        return 2
    except (FormatError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
