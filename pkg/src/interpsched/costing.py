"""Second-stage costing and constraint checking.

This module is the single source of truth for what a schedule costs and
whether it is feasible. Every solver and heuristic in the package is tested
against it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .domain import (
    Assignment,
    HiringDecision,
    ProblemInstance,
    Scenario,
    Schedule,
    ScheduleCosting,
    derive_skill,
)

#: Constraint-family codes emitted by the checker.
SINGLE_ASSIGNMENT = "single-assignment"
START_AVAILABILITY = "start-availability"
SESSION_OVERLAP = "session-overlap"
START_BEFORE_ARRIVAL = "start-before-arrival"
SKILL_MISMATCH = "skill-mismatch"
UNHIRED_USAGE = "unhired-usage"
HIRED_UNUSED = "hired-unused"
HORIZON_OVERRUN = "horizon-overrun"
UNKNOWN_ID = "unknown-id"


@dataclass(frozen=True)
class Violation:
    """One breached constraint family, with the ids involved."""

    family: str
    ids: tuple[str, ...]
    scenario_index: Optional[int] = None
    detail: str = ""

    def csv_row(self) -> tuple[str, str, str]:
        index = "" if self.scenario_index is None else str(self.scenario_index)
        return (self.family, index, ";".join(self.ids))


class UnhiredInterpreterError(ValueError):
    """A schedule uses a part-timer whose hire bit is off."""


def second_stage_cost(
    instance: ProblemInstance,
    hiring: HiringDecision,
    scenario: Scenario,
    schedule: Schedule,
) -> ScheduleCosting:
    """Cost one schedule under one scenario for a fixed hiring decision.

    Served patients wait start - arrival; unserved ones are charged
    alpha*horizon - arrival. Interpreter loads are the summed realized
    durations of their sessions; overtime and extra time are the excess over
    regular time (full-timers) and the covered threshold (hired part-timers).
    """
    patients = {p.id: p for p in scenario.patients(instance)}
    by_patient = schedule.by_patient()
    horizon_charge = instance.alpha * instance.horizon

    loads: dict[str, int] = {itp.id: 0 for itp in instance.interpreters}
    waits: dict[str, float] = {}
    penalty_cost = 0.0
    for patient in scenario.patients(instance):
        assignment = by_patient.get(patient.id)
        if assignment is not None and assignment.served:
            interpreter = instance.interpreter_by_id(assignment.interpreter)
            if not interpreter.is_full_time and not hiring.is_hired(interpreter.id):
                raise UnhiredInterpreterError(
                    f"schedule assigns unhired part-timer {interpreter.id!r} to {patient.id!r}"
                )
            wait = float(assignment.start - patient.arrival)
            loads[interpreter.id] += scenario.realized_duration(patient)
        else:
            wait = horizon_charge - patient.arrival
        waits[patient.id] = wait
        penalty_cost += patient.penalty_rate * wait

    overtime: dict[str, int] = {}
    extra: dict[str, int] = {}
    overtime_cost = 0.0
    variable_cost = 0.0
    fixed_cost = 0.0
    for itp in instance.interpreters:
        if itp.is_full_time:
            over = max(0, loads[itp.id] - itp.regular_time)
            overtime[itp.id] = over
            overtime_cost += itp.overtime_rate * over
        elif hiring.is_hired(itp.id):
            ext = max(0, loads[itp.id] - itp.covered_threshold)
            extra[itp.id] = ext
            variable_cost += itp.variable_rate * ext
            fixed_cost += itp.fixed_cost
    return ScheduleCosting(
        per_patient_wait=waits,
        per_interpreter_load=loads,
        per_interpreter_overtime=overtime,
        per_parttimer_extra=extra,
        fixed_cost=fixed_cost,
        variable_cost=variable_cost,
        overtime_cost=overtime_cost,
        penalty_cost=penalty_cost,
    )


def _session_span(assignment: Assignment, duration: int, horizon: int) -> tuple[int, int]:
    """Occupied periods of a session: truncated at the horizon (the full
    duration is still worked and paid)."""
    return (assignment.start, min(horizon, assignment.start + duration - 1))


def check_constraints(
    instance: ProblemInstance,
    hiring: HiringDecision,
    scenario: Scenario,
    schedule: Schedule,
    scenario_index: Optional[int] = None,
) -> list[Violation]:
    """Check one schedule against every per-scenario constraint family.

    Violations are returned as data, one record per breach; an empty list
    means the schedule is feasible. The hired-but-unused check spans a whole
    batch and lives in :func:`check_constraints_batch`.
    """
    violations: list[Violation] = []
    patients = {p.id: p for p in scenario.patients(instance)}
    interpreters = {itp.id: itp for itp in instance.interpreters}

    seen: set[str] = set()
    for assignment in schedule.assignments:
        if assignment.patient in seen:
            violations.append(
                Violation(SINGLE_ASSIGNMENT, (assignment.patient,), scenario_index, "patient assigned twice")
            )
        seen.add(assignment.patient)

    sessions: dict[str, list[tuple[int, int, str]]] = {}
    for assignment in schedule.assignments:
        patient = patients.get(assignment.patient)
        if patient is None:
            violations.append(
                Violation(UNKNOWN_ID, (assignment.patient,), scenario_index, "patient not in scenario")
            )
            continue
        if not assignment.served:
            continue
        interpreter = interpreters.get(assignment.interpreter)
        if interpreter is None:
            violations.append(
                Violation(UNKNOWN_ID, (assignment.patient, assignment.interpreter), scenario_index, "unknown interpreter")
            )
            continue
        ids = (assignment.patient, assignment.interpreter)
        duration = scenario.realized_duration(patient)
        start, end = _session_span(assignment, duration, instance.horizon)
        if start < patient.arrival:
            violations.append(Violation(START_BEFORE_ARRIVAL, ids, scenario_index, f"start {start} < arrival {patient.arrival}"))
        if not derive_skill(interpreter, patient):
            violations.append(Violation(SKILL_MISMATCH, ids, scenario_index, f"{patient.language} not spoken"))
        if start < 1 or start > instance.horizon:
            violations.append(Violation(HORIZON_OVERRUN, ids, scenario_index, f"start {start} outside 1..{instance.horizon}"))
        else:
            span = interpreter.availability[start - 1 : end]
            if not all(span):
                violations.append(Violation(START_AVAILABILITY, ids, scenario_index, "unavailable during session"))
        if not interpreter.is_full_time and not hiring.is_hired(interpreter.id):
            violations.append(Violation(UNHIRED_USAGE, ids, scenario_index, "part-timer not hired"))
        sessions.setdefault(assignment.interpreter, []).append((start, end, assignment.patient))

    for interpreter_id, spans in sessions.items():
        spans.sort()
        for (s1, e1, p1), (s2, e2, p2) in zip(spans, spans[1:]):
            if s2 <= e1:
                violations.append(
                    Violation(SESSION_OVERLAP, (interpreter_id, p1, p2), scenario_index, f"[{s1},{e1}] overlaps [{s2},{e2}]")
                )
    return violations


def check_constraints_batch(
    instance: ProblemInstance,
    hiring: HiringDecision,
    scenarios: Sequence[Scenario],
    schedules: Sequence[Schedule],
) -> list[Violation]:
    """Per-scenario checks over a batch, plus the batch-level rule that every
    hired part-timer is assigned in at least one scenario."""
    if len(scenarios) != len(schedules):
        raise ValueError("scenario/schedule count mismatch")
    violations: list[Violation] = []
    used: set[str] = set()
    for index, (scenario, schedule) in enumerate(zip(scenarios, schedules)):
        violations.extend(check_constraints(instance, hiring, scenario, schedule, scenario_index=index))
        for assignment in schedule.assignments:
            if assignment.served:
                used.add(assignment.interpreter)
    for part_timer_id in hiring.hired_ids():
        if part_timer_id not in used:
            violations.append(Violation(HIRED_UNUSED, (part_timer_id,), None, "hired but never assigned"))
    return violations


def total_objective(
    instance: ProblemInstance,
    hiring: HiringDecision,
    scenarios: Sequence[Scenario],
    schedules: Sequence[Schedule],
) -> float:
    """First-stage fixed cost plus the probability-weighted second-stage cost
    over the batch. Fixed cost is counted exactly once."""
    if len(scenarios) != len(schedules):
        raise ValueError("scenario/schedule count mismatch")
    fixed = sum(
        itp.fixed_cost for itp in instance.part_timers if hiring.is_hired(itp.id)
    )
    expected_second_stage = 0.0
    for scenario, schedule in zip(scenarios, schedules):
        if scenario.probability is None:
            raise ValueError("scenario probability unset; cost a sampled batch")
        costing = second_stage_cost(instance, hiring, scenario, schedule)
        expected_second_stage += scenario.probability * (
            costing.variable_cost + costing.overtime_cost + costing.penalty_cost
        )
    return fixed + expected_second_stage
