"""Flat numeric views of instances and scenarios for the greedy kernel.

The canonical interpreter order is full-timers in roster order followed by
part-timers in canonical hiring order, which is exactly the scan order of the
greedy dispatch heuristic. Languages are encoded as bit masks (at most 64 per
instance).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import HiringDecision, ProblemInstance, Scenario, group_part_timers

MAX_LANGUAGES = 64


def _availability_span_ends(avail_row: np.ndarray) -> np.ndarray:
    """For each period t (1-based), the last period of the consecutive
    available run containing t, or t-1 when t itself is unavailable."""
    horizon = avail_row.shape[0]
    span = np.zeros(horizon, dtype=np.int32)
    run_end = 0
    for t in range(horizon, 0, -1):
        if avail_row[t - 1]:
            if run_end == 0:
                run_end = t
            span[t - 1] = run_end
        else:
            run_end = 0
            span[t - 1] = t - 1
    return span


@dataclass(frozen=True)
class InstanceView:
    """Kernel-ready arrays for one (simplified) instance."""

    horizon: int
    alpha_horizon: float
    languages: tuple[str, ...]
    interpreter_ids: tuple[str, ...]
    n_full_time: int
    lang_mask: np.ndarray
    avail: np.ndarray
    span_end: np.ndarray
    regular_time: np.ndarray
    overtime_rate: np.ndarray
    covered_threshold: np.ndarray
    variable_rate: np.ndarray
    fixed_cost: np.ndarray
    template: HiringDecision

    def language_bit(self, language: str) -> int:
        return 1 << self.languages.index(language)

    def hired_vector(self, hiring: HiringDecision) -> np.ndarray:
        """Per-interpreter usable flags: full-timers always, part-timers per
        their hire bit."""
        if hiring.order != self.template.order:
            raise ValueError("hiring decision ordering does not match this instance")
        hired = np.ones(len(self.interpreter_ids), dtype=np.uint8)
        hired[self.n_full_time :] = np.asarray(hiring.bits, dtype=np.uint8)
        return hired

    def fixed_cost_of(self, hiring: HiringDecision) -> float:
        return float(np.dot(self.fixed_cost[self.n_full_time :], self.hired_vector(hiring)[self.n_full_time :]))


def build_instance_view(instance: ProblemInstance) -> InstanceView:
    template = group_part_timers(instance)
    full_timers = instance.full_timers
    part_by_id = {itp.id: itp for itp in instance.part_timers}
    ordered = list(full_timers) + [part_by_id[pid] for pid in template.order]

    language_set: set[str] = set()
    for itp in ordered:
        language_set.update(itp.languages)
    language_set.update(p.language for p in instance.outpatients)
    language_set.update(instance.arrival_rates)
    languages = sorted(language_set)
    if len(languages) > MAX_LANGUAGES:
        raise ValueError(f"more than {MAX_LANGUAGES} languages are not supported")
    lang_index = {lang: i for i, lang in enumerate(languages)}

    n = len(ordered)
    horizon = instance.horizon
    lang_mask = np.zeros(n, dtype=np.uint64)
    avail = np.zeros((n, horizon), dtype=np.uint8)
    span_end = np.zeros((n, horizon), dtype=np.int32)
    regular_time = np.zeros(n, dtype=np.float64)
    overtime_rate = np.zeros(n, dtype=np.float64)
    covered_threshold = np.zeros(n, dtype=np.float64)
    variable_rate = np.zeros(n, dtype=np.float64)
    fixed_cost = np.zeros(n, dtype=np.float64)
    for i, itp in enumerate(ordered):
        mask = 0
        for lang in itp.languages:
            mask |= 1 << lang_index[lang]
        lang_mask[i] = mask
        avail[i, :] = np.asarray(itp.availability, dtype=np.uint8)
        span_end[i, :] = _availability_span_ends(avail[i, :])
        if itp.is_full_time:
            regular_time[i] = itp.regular_time
            overtime_rate[i] = itp.overtime_rate
        else:
            covered_threshold[i] = itp.covered_threshold
            variable_rate[i] = itp.variable_rate
            fixed_cost[i] = itp.fixed_cost
    return InstanceView(
        horizon=horizon,
        alpha_horizon=instance.alpha * horizon,
        languages=tuple(languages),
        interpreter_ids=tuple(itp.id for itp in ordered),
        n_full_time=len(full_timers),
        lang_mask=lang_mask,
        avail=avail,
        span_end=span_end,
        regular_time=regular_time,
        overtime_rate=overtime_rate,
        covered_threshold=covered_threshold,
        variable_rate=variable_rate,
        fixed_cost=fixed_cost,
        template=template,
    )


@dataclass(frozen=True)
class ScenarioView:
    """Kernel-ready arrays for one scenario's patients, in canonical order
    (instance outpatients first, then emergencies)."""

    patient_ids: tuple[str, ...]
    n_outpatients: int
    arrival: np.ndarray
    duration: np.ndarray
    penalty: np.ndarray
    lang_mask: np.ndarray
    tie_rank: np.ndarray


def build_scenario_view(view: InstanceView, instance: ProblemInstance, scenario: Scenario) -> ScenarioView:
    patients = scenario.patients(instance)
    n = len(patients)
    arrival = np.zeros(n, dtype=np.int32)
    duration = np.zeros(n, dtype=np.int32)
    penalty = np.zeros(n, dtype=np.float64)
    lang_mask = np.zeros(n, dtype=np.uint64)
    for p, patient in enumerate(patients):
        arrival[p] = patient.arrival
        duration[p] = scenario.realized_duration(patient)
        penalty[p] = patient.penalty_rate
        lang_mask[p] = view.language_bit(patient.language)
    ids = tuple(p.id for p in patients)
    tie_rank = np.zeros(n, dtype=np.int32)
    for rank, p in enumerate(sorted(range(n), key=lambda p: ids[p])):
        tie_rank[p] = rank
    return ScenarioView(
        patient_ids=ids,
        n_outpatients=len(instance.outpatients),
        arrival=arrival,
        duration=duration,
        penalty=penalty,
        lang_mask=lang_mask,
        tie_rank=tie_rank,
    )
