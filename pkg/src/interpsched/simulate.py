"""Large-sample evaluation of a hiring decision, the expected-value baseline,
and the one-parameter sensitivity sweep."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Optional

from .arrays import build_instance_view, build_scenario_view
from .domain import HiringDecision, PatientClass, ProblemInstance
from .exact import (
    DEFAULT_MAX_PART_TIMERS,
    DEFAULT_MAX_PATIENTS,
    SizeGuardExceeded,
    second_stage_exact_assignments,
    solve_saa_exact,
)
from .greedy import DEFAULT_POLICY, greedy_assign_view
from .scenarios import RandomStream, expected_scenario, sample_batch
from .tabu import TsParams, run_ts

SWEEP_FACTORS = (1.0, 1.2, 1.4, 1.6, 1.8, 2.0)


@dataclass(frozen=True)
class SimulationStats:
    """Monte Carlo summary of a fixed hiring decision."""

    mean_total: float
    std_total: float
    mean_wait: float
    service_level_emergency: float
    service_level_outpatient: float
    cost_breakdown_means: tuple[float, float, float, float]
    hired_count_per_language_set: dict[str, int]

    @property
    def mean_fixed(self) -> float:
        return self.cost_breakdown_means[0]

    @property
    def mean_variable(self) -> float:
        return self.cost_breakdown_means[1]

    @property
    def mean_overtime(self) -> float:
        return self.cost_breakdown_means[2]

    @property
    def mean_penalty(self) -> float:
        return self.cost_breakdown_means[3]


def group_language_labels(instance: ProblemInstance, template: HiringDecision) -> tuple[str, ...]:
    """One label per hiring group, e.g. "Spanish" or "Hmong+Spanish"."""
    by_id = {itp.id: itp for itp in instance.part_timers}
    labels = []
    for lo, _ in template.group_boundaries:
        labels.append("+".join(sorted(by_id[template.order[lo]].languages)))
    return tuple(labels)


def hired_counts_by_group(instance: ProblemInstance, hiring: HiringDecision) -> dict[str, int]:
    labels = group_language_labels(instance, hiring)
    counts: dict[str, int] = {}
    for label, (lo, hi) in zip(labels, hiring.group_boundaries):
        counts[label] = sum(hiring.bits[lo : hi + 1])
    return counts


def simulate(
    instance: ProblemInstance,
    hiring: HiringDecision,
    n_scenarios: int,
    master_seed: int = 0,
    scheduler: str = "greedy",
    policy: str = DEFAULT_POLICY,
    service_threshold: Optional[int] = None,
    max_patients: int = DEFAULT_MAX_PATIENTS,
) -> SimulationStats:
    """Sample scenarios, schedule each (greedy by default, exact within the
    desk-scale guard when requested), and aggregate costs and service quality.

    Service level is the fraction of patients of a class that are served at
    all; with ``service_threshold`` set, served within that many periods.
    Standard deviation uses the n-1 divisor (0 for a single scenario).
    """
    if n_scenarios < 1:
        raise ValueError("n_scenarios must be >= 1")
    if scheduler not in ("greedy", "exact"):
        raise ValueError("scheduler must be 'greedy' or 'exact'")
    view = build_instance_view(instance)
    hired = view.hired_vector(hiring)
    fixed = view.fixed_cost_of(hiring)
    batch = sample_batch(instance, n_scenarios, master_seed, purpose="simulate")

    totals: list[float] = []
    sum_variable = sum_overtime = sum_penalty = 0.0
    wait_sum = 0.0
    patient_count = 0
    served = {PatientClass.OUTPATIENT: 0, PatientClass.EMERGENCY: 0}
    demand = {PatientClass.OUTPATIENT: 0, PatientClass.EMERGENCY: 0}
    for scenario in batch:
        sv = build_scenario_view(view, instance, scenario)
        interp_of = start_of = None
        if scheduler == "exact":
            try:
                interp_of, start_of, _ = second_stage_exact_assignments(view, hiring, sv, max_patients)
                variable, overtime, penalty = _components_of(view, sv, hired, interp_of, start_of)
            except SizeGuardExceeded:
                interp_of = None
        if interp_of is None:
            interp_of, start_of, variable, overtime, penalty = greedy_assign_view(view, hired, sv, policy)
        totals.append(fixed + variable + overtime + penalty)
        sum_variable += variable
        sum_overtime += overtime
        sum_penalty += penalty
        n_out = sv.n_outpatients
        for p in range(len(sv.patient_ids)):
            cls = PatientClass.OUTPATIENT if p < n_out else PatientClass.EMERGENCY
            demand[cls] += 1
            patient_count += 1
            if interp_of[p] >= 0:
                wait = float(start_of[p] - sv.arrival[p])
                if service_threshold is None or wait <= service_threshold:
                    served[cls] += 1
            else:
                wait = view.alpha_horizon - float(sv.arrival[p])
            wait_sum += wait

    n = len(totals)
    mean_total = sum(totals) / n
    std_total = math.sqrt(sum((t - mean_total) ** 2 for t in totals) / (n - 1)) if n > 1 else 0.0
    return SimulationStats(
        mean_total=mean_total,
        std_total=std_total,
        mean_wait=wait_sum / patient_count if patient_count else 0.0,
        service_level_emergency=(
            served[PatientClass.EMERGENCY] / demand[PatientClass.EMERGENCY]
            if demand[PatientClass.EMERGENCY]
            else 1.0
        ),
        service_level_outpatient=(
            served[PatientClass.OUTPATIENT] / demand[PatientClass.OUTPATIENT]
            if demand[PatientClass.OUTPATIENT]
            else 1.0
        ),
        cost_breakdown_means=(fixed, sum_variable / n, sum_overtime / n, sum_penalty / n),
        hired_count_per_language_set=hired_counts_by_group(instance, hiring),
    )


def _components_of(view, sv, hired, interp_of, start_of) -> tuple[float, float, float]:
    """Cost components of an explicit assignment, mirroring the kernel's
    accumulation order."""
    n_interp = len(view.interpreter_ids)
    load = [0.0] * n_interp
    for p in range(len(sv.patient_ids)):
        if interp_of[p] >= 0:
            load[interp_of[p]] += int(sv.duration[p])
    penalty = 0.0
    for p in range(len(sv.patient_ids)):
        if interp_of[p] >= 0:
            wait = float(start_of[p] - sv.arrival[p])
        else:
            wait = view.alpha_horizon - float(sv.arrival[p])
        penalty += float(sv.penalty[p]) * wait
    overtime = 0.0
    for i in range(view.n_full_time):
        over = load[i] - view.regular_time[i]
        if over > 0.0:
            overtime += view.overtime_rate[i] * over
    variable = 0.0
    for i in range(view.n_full_time, n_interp):
        if hired[i]:
            extra = load[i] - view.covered_threshold[i]
            if extra > 0.0:
                variable += view.variable_rate[i] * extra
    return variable, overtime, penalty


def solve_evp(
    instance: ProblemInstance,
    master_seed: int = 0,
    ts_params: Optional[TsParams] = None,
    max_patients: int = DEFAULT_MAX_PATIENTS,
    max_part_timers: int = DEFAULT_MAX_PART_TIMERS,
) -> HiringDecision:
    """Hiring decision of the expected-value problem: every random quantity
    replaced by its expectation, then solved as a single-scenario problem."""
    scenario = expected_scenario(instance)
    try:
        decision, _ = solve_saa_exact(
            instance, [scenario], max_patients=max_patients, max_part_timers=max_part_timers
        )
        return decision
    except SizeGuardExceeded:
        pass
    base = ts_params if ts_params is not None else TsParams()
    params = replace(base, fitness_sample_size=1, master_seed=RandomStream(master_seed, ("evp", 0)).derived_seed())
    return run_ts(instance, params, fitness_scenarios=[scenario]).decision


class ScaledParameter(enum.Enum):
    OVERTIME_RATE = "overtime-rate"
    PART_TIME_FIXED = "part-time-fixed"
    PART_TIME_VARIABLE = "part-time-variable"
    WAIT_PENALTY = "wait-penalty"
    EMERGENCY_RATE = "emergency-rate"


def scale_parameter(instance: ProblemInstance, parameter: ScaledParameter, factor: float) -> ProblemInstance:
    """A copy of the instance with every matching field multiplied by the
    factor. Wait penalties scale for all patient classes."""
    if factor < 0:
        raise ValueError("factor must be >= 0")
    if parameter is ScaledParameter.OVERTIME_RATE:
        interpreters = tuple(
            replace(itp, overtime_rate=itp.overtime_rate * factor) if itp.is_full_time else itp
            for itp in instance.interpreters
        )
        return replace(instance, interpreters=interpreters)
    if parameter is ScaledParameter.PART_TIME_FIXED:
        interpreters = tuple(
            itp if itp.is_full_time else replace(itp, fixed_cost=itp.fixed_cost * factor)
            for itp in instance.interpreters
        )
        return replace(instance, interpreters=interpreters)
    if parameter is ScaledParameter.PART_TIME_VARIABLE:
        interpreters = tuple(
            itp if itp.is_full_time else replace(itp, variable_rate=itp.variable_rate * factor)
            for itp in instance.interpreters
        )
        return replace(instance, interpreters=interpreters)
    if parameter is ScaledParameter.WAIT_PENALTY:
        outpatients = tuple(replace(p, penalty_rate=p.penalty_rate * factor) for p in instance.outpatients)
        return replace(
            instance,
            outpatients=outpatients,
            emergency_penalty_rate=instance.emergency_penalty_rate * factor,
        )
    if parameter is ScaledParameter.EMERGENCY_RATE:
        rates = {lang: rate * factor for lang, rate in instance.arrival_rates.items()}
        return replace(instance, arrival_rates=rates)
    raise ValueError(f"unknown parameter {parameter!r}")


@dataclass(frozen=True)
class SweepRow:
    experiment: int
    factor: float
    hiring: HiringDecision
    stats: SimulationStats


def sensitivity_sweep(
    instance: ProblemInstance,
    parameter: ScaledParameter,
    ts_params: Optional[TsParams] = None,
    n_sim: int = 500,
    master_seed: int = 0,
) -> list[SweepRow]:
    """Six experiments at factors 1.0 through 2.0 in 20% steps; experiment 1
    is the base case. Each experiment re-runs tabu search with its own fixed
    seed, then simulates the resulting decision."""
    base = ts_params if ts_params is not None else TsParams()
    rows: list[SweepRow] = []
    for k, factor in enumerate(SWEEP_FACTORS):
        scaled = scale_parameter(instance, parameter, factor)
        seed = RandomStream(master_seed, (f"sweep-{parameter.value}", k)).derived_seed()
        params = replace(base, master_seed=seed)
        decision = run_ts(scaled, params).decision
        stats = simulate(scaled, decision, n_sim, master_seed=seed)
        rows.append(SweepRow(experiment=k + 1, factor=factor, hiring=decision, stats=stats))
    return rows
