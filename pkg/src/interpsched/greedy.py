"""Greedy schedule construction and multi-scenario fitness evaluation.

One sweep over the day: whenever an interpreter is idle and available, it
takes the waiting compatible patient with the policy-best accrued penalty
(default: largest penalty accrued so far, so expensive waits are cut first).
Full-timers are scanned before hired part-timers; unhired part-timers never
serve.
"""
from __future__ import annotations

import numpy as np

from . import kernel
from .arrays import InstanceView, ScenarioView, build_instance_view, build_scenario_view
from .domain import Assignment, HiringDecision, ProblemInstance, Scenario, Schedule

POLICIES = {
    "max_accrued": kernel.POLICY_MAX_ACCRUED,
    "min_accrued": kernel.POLICY_MIN_ACCRUED,
}
DEFAULT_POLICY = "max_accrued"


def _policy_code(policy: str) -> int:
    try:
        return POLICIES[policy]
    except KeyError:
        raise ValueError(f"unknown policy {policy!r}; expected one of {sorted(POLICIES)}") from None


def greedy_assign_view(
    view: InstanceView,
    hired: np.ndarray,
    scenario_view: ScenarioView,
    policy: str = DEFAULT_POLICY,
) -> tuple[np.ndarray, np.ndarray, float, float, float]:
    """Low-level fast path: run the kernel on prepared arrays.

    Returns (interpreter index per patient with -1 unserved, start periods,
    variable cost, overtime cost, penalty cost).
    """
    n_pat = len(scenario_view.patient_ids)
    out_interpreter = np.empty(n_pat, dtype=np.int32)
    out_start = np.empty(n_pat, dtype=np.int32)
    variable, overtime, penalty = kernel.greedy_assign(
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
        scenario_view.arrival,
        scenario_view.duration,
        scenario_view.penalty,
        scenario_view.lang_mask,
        scenario_view.tie_rank,
        _policy_code(policy),
        out_interpreter,
        out_start,
    )
    return out_interpreter, out_start, variable, overtime, penalty


def schedule_from_arrays(
    view: InstanceView,
    scenario_view: ScenarioView,
    out_interpreter: np.ndarray,
    out_start: np.ndarray,
) -> Schedule:
    assignments = []
    for p, patient_id in enumerate(scenario_view.patient_ids):
        idx = int(out_interpreter[p])
        if idx < 0:
            assignments.append(Assignment(patient=patient_id, interpreter=None))
        else:
            assignments.append(
                Assignment(patient=patient_id, interpreter=view.interpreter_ids[idx], start=int(out_start[p]))
            )
    return Schedule(assignments=tuple(assignments))


def construct_schedule(
    instance: ProblemInstance,
    hiring: HiringDecision,
    scenario: Scenario,
    policy: str = DEFAULT_POLICY,
    view: InstanceView | None = None,
) -> Schedule:
    """Build a feasible schedule for one scenario under a fixed hiring
    decision."""
    if view is None:
        view = build_instance_view(instance)
    scenario_view = build_scenario_view(view, instance, scenario)
    out_interpreter, out_start, _, _, _ = greedy_assign_view(
        view, view.hired_vector(hiring), scenario_view, policy
    )
    return schedule_from_arrays(view, scenario_view, out_interpreter, out_start)


def fitness(
    instance: ProblemInstance,
    hiring: HiringDecision,
    scenarios: list[Scenario] | tuple[Scenario, ...],
    policy: str = DEFAULT_POLICY,
    view: InstanceView | None = None,
    scenario_views: list[ScenarioView] | None = None,
) -> float:
    """Estimated objective of a hiring decision: its fixed cost plus the
    probability-weighted greedy second-stage cost over the scenarios.

    Hired-but-unused part-timers still pay their fixed cost; the candidate is
    costed as stated.
    """
    if not scenarios:
        raise ValueError("at least one scenario is required")
    if view is None:
        view = build_instance_view(instance)
    if scenario_views is None:
        scenario_views = [build_scenario_view(view, instance, s) for s in scenarios]
    hired = view.hired_vector(hiring)
    total = view.fixed_cost_of(hiring)
    for scenario, scenario_view in zip(scenarios, scenario_views):
        probability = scenario.probability
        if probability is None:
            raise ValueError("scenario probability unset; use probabilities from a sampled batch")
        _, _, variable, overtime, penalty = greedy_assign_view(view, hired, scenario_view, policy)
        total += probability * (variable + overtime + penalty)
    return total
