"""No-pruning enumeration oracle for tiny instances.

Everything here is written directly against the domain objects, with its own
feasibility and cost arithmetic, independent of the branch-and-bound solver
and of the greedy kernel. It exists to certify them and is exponential on
purpose.
"""
from __future__ import annotations

import itertools
from typing import Optional, Sequence

from .domain import (
    Assignment,
    HiringDecision,
    InterpreterProfile,
    PatientRecord,
    ProblemInstance,
    Scenario,
    Schedule,
    derive_skill,
    group_part_timers,
)

Option = Optional[tuple[str, int]]  # (interpreter id, start) or None = unserved


def _patient_options(
    instance: ProblemInstance,
    hiring: HiringDecision,
    scenario: Scenario,
    patient: PatientRecord,
) -> list[Option]:
    duration = scenario.realized_duration(patient)
    options: list[Option] = []
    for itp in instance.interpreters:
        if not itp.is_full_time and not hiring.is_hired(itp.id):
            continue
        if not derive_skill(itp, patient):
            continue
        for start in range(patient.arrival, instance.horizon + 1):
            end = min(instance.horizon, start + duration - 1)
            if all(itp.availability[start - 1 : end]):
                options.append((itp.id, start))
    options.append(None)
    return options


def _tuple_cost(
    instance: ProblemInstance,
    hiring: HiringDecision,
    patients: Sequence[PatientRecord],
    durations: Sequence[int],
    choice: Sequence[Option],
) -> Optional[float]:
    """Second-stage cost of one assignment tuple, or None when two sessions of
    the same interpreter overlap."""
    sessions: dict[str, list[tuple[int, int]]] = {}
    load: dict[str, int] = {}
    penalty = 0.0
    for patient, duration, option in zip(patients, durations, choice):
        if option is None:
            penalty += patient.penalty_rate * (instance.alpha * instance.horizon - patient.arrival)
            continue
        interpreter_id, start = option
        end = min(instance.horizon, start + duration - 1)
        for s, e in sessions.setdefault(interpreter_id, []):
            if s <= end and start <= e:
                return None
        sessions[interpreter_id].append((start, end))
        load[interpreter_id] = load.get(interpreter_id, 0) + duration
        penalty += patient.penalty_rate * (start - patient.arrival)
    cost = penalty
    for itp in instance.interpreters:
        used = load.get(itp.id, 0)
        if itp.is_full_time:
            cost += itp.overtime_rate * max(0, used - itp.regular_time)
        elif hiring.is_hired(itp.id):
            cost += itp.variable_rate * max(0, used - itp.covered_threshold)
    return cost


def _best_second_stage(
    instance: ProblemInstance,
    hiring: HiringDecision,
    scenario: Scenario,
) -> tuple[tuple[Option, ...], float]:
    """Try every assignment tuple; return a cheapest feasible one with its
    second-stage cost."""
    patients = scenario.patients(instance)
    durations = [scenario.realized_duration(p) for p in patients]
    option_lists = [_patient_options(instance, hiring, scenario, p) for p in patients]
    best_cost = float("inf")
    best_choice: tuple[Option, ...] = tuple(None for _ in patients)
    for choice in itertools.product(*option_lists):
        cost = _tuple_cost(instance, hiring, patients, durations, choice)
        if cost is not None and cost < best_cost:
            best_cost = cost
            best_choice = choice
    return best_choice, best_cost


def brute_force_second_stage(
    instance: ProblemInstance,
    hiring: HiringDecision,
    scenario: Scenario,
) -> tuple[Schedule, float]:
    """Cheapest feasible schedule for one scenario by full enumeration; the
    money is the decision's fixed cost plus the minimal second-stage cost."""
    patients = scenario.patients(instance)
    best_choice, best_cost = _best_second_stage(instance, hiring, scenario)
    assignments = tuple(
        Assignment(patient=p.id, interpreter=None)
        if option is None
        else Assignment(patient=p.id, interpreter=option[0], start=option[1])
        for p, option in zip(patients, best_choice)
    )
    fixed = sum(
        itp.fixed_cost for itp in instance.part_timers if hiring.is_hired(itp.id)
    )
    return Schedule(assignments=assignments), fixed + best_cost


def brute_force_saa(
    instance: ProblemInstance,
    scenarios: Sequence[Scenario],
) -> tuple[HiringDecision, float]:
    """Enumerate every hiring vector in lexicographic order and every
    assignment tuple underneath; first minimum wins, which is exactly the
    lexicographically-smallest-bits tie-break."""
    template = group_part_timers(instance)
    part_timers = {itp.id: itp for itp in instance.part_timers}
    best_total = float("inf")
    best_bits = template.bits
    for bits in itertools.product((False, True), repeat=len(template.bits)):
        hiring = template.with_bits(bits)
        total = sum(part_timers[pid].fixed_cost for pid in hiring.hired_ids())
        for scenario in scenarios:
            if scenario.probability is None:
                raise ValueError("scenario probability unset")
            _, cost = _best_second_stage(instance, hiring, scenario)
            total += scenario.probability * cost
        if total < best_total:
            best_total = total
            best_bits = bits
    return template.with_bits(best_bits), best_total


def brute_force_saa_joint(
    instance: ProblemInstance,
    scenarios: Sequence[Scenario],
) -> tuple[HiringDecision, float]:
    """Joint enumeration over the cross product of per-scenario assignment
    tuples (no per-scenario decomposition), for the decoupling check."""
    template = group_part_timers(instance)
    part_timers = {itp.id: itp for itp in instance.part_timers}
    best_total = float("inf")
    best_bits = template.bits
    for bits in itertools.product((False, True), repeat=len(template.bits)):
        hiring = template.with_bits(bits)
        fixed = sum(part_timers[pid].fixed_cost for pid in hiring.hired_ids())
        per_scenario_choices = []
        per_scenario_patients = []
        per_scenario_durations = []
        for scenario in scenarios:
            patients = scenario.patients(instance)
            per_scenario_patients.append(patients)
            per_scenario_durations.append([scenario.realized_duration(p) for p in patients])
            per_scenario_choices.append(
                list(itertools.product(*(_patient_options(instance, hiring, scenario, p) for p in patients)))
            )
        for joint in itertools.product(*per_scenario_choices):
            total = fixed
            feasible = True
            for scenario, patients, durations, choice in zip(
                scenarios, per_scenario_patients, per_scenario_durations, joint
            ):
                cost = _tuple_cost(instance, hiring, patients, durations, choice)
                if cost is None:
                    feasible = False
                    break
                total += scenario.probability * cost
            if feasible and total < best_total:
                best_total = total
                best_bits = bits
    return template.with_bits(best_bits), best_total
