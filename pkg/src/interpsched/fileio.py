"""Stable JSON formats for instances, scenario batches, solutions and
reports, plus the CSV renderings used by the command-line tool.

Every format carries a schema_version field; dumps are byte-stable (sorted
keys, fixed separators, trailing newline).
"""
from __future__ import annotations

import json
from typing import Any, Mapping, Sequence

from .domain import (
    DurationModel,
    HiringDecision,
    InpatientPreAssignment,
    InterpreterKind,
    InterpreterProfile,
    PatientClass,
    PatientRecord,
    ProblemInstance,
    Scenario,
    group_part_timers,
)
from .saa import SaaReport
from .simulate import SimulationStats

SCHEMA_VERSION = 1


class FormatError(ValueError):
    """Malformed document; the message carries the offending field path."""


def _get(obj: Mapping[str, Any], key: str, path: str, expected=None):
    if key not in obj:
        raise FormatError(f"{path}.{key}: missing")
    value = obj[key]
    if expected is not None and not isinstance(value, expected):
        names = expected.__name__ if isinstance(expected, type) else "/".join(t.__name__ for t in expected)
        raise FormatError(f"{path}.{key}: expected {names}, got {type(value).__name__}")
    return value


def dumps(document: Mapping[str, Any]) -> str:
    return json.dumps(document, sort_keys=True, indent=2) + "\n"


def _patient_doc(patient: PatientRecord) -> dict[str, Any]:
    return {
        "id": patient.id,
        "class": patient.patient_class.value,
        "language": patient.language,
        "arrival": patient.arrival,
        "penalty_rate": patient.penalty_rate,
        "duration": patient.duration,
    }


def _patient_from(doc: Mapping[str, Any], path: str) -> PatientRecord:
    try:
        cls = PatientClass(_get(doc, "class", path, str))
    except ValueError as exc:
        raise FormatError(f"{path}.class: {exc}") from None
    duration = doc.get("duration")
    if duration is not None and not isinstance(duration, int):
        raise FormatError(f"{path}.duration: expected int or null")
    try:
        return PatientRecord(
            id=_get(doc, "id", path, str),
            patient_class=cls,
            language=_get(doc, "language", path, str),
            arrival=_get(doc, "arrival", path, int),
            penalty_rate=float(_get(doc, "penalty_rate", path, (int, float))),
            duration=duration,
        )
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from None


def instance_document(instance: ProblemInstance) -> dict[str, Any]:
    languages = set()
    for itp in instance.interpreters:
        languages.update(itp.languages)
    for pat in instance.outpatients:
        languages.add(pat.language)
    languages.update(instance.arrival_rates)
    interpreters = []
    for itp in instance.interpreters:
        doc: dict[str, Any] = {
            "id": itp.id,
            "kind": itp.kind.value,
            "languages": sorted(itp.languages),
            "availability": [int(a) for a in itp.availability],
        }
        if itp.is_full_time:
            doc["regular_time"] = itp.regular_time
            doc["overtime_rate"] = itp.overtime_rate
        else:
            doc["fixed_cost"] = itp.fixed_cost
            doc["covered_threshold"] = itp.covered_threshold
            doc["variable_rate"] = itp.variable_rate
        interpreters.append(doc)
    return {
        "schema_version": SCHEMA_VERSION,
        "horizon": instance.horizon,
        "languages": sorted(languages),
        "alpha": instance.alpha,
        "interpreters": interpreters,
        "outpatients": [_patient_doc(p) for p in instance.outpatients],
        "preassignments": [
            {"interpreter": pre.interpreter, "patient": _patient_doc(pre.patient)}
            for pre in instance.inpatient_preassignments
        ],
        "arrival_rates": {lang: instance.arrival_rates[lang] for lang in sorted(instance.arrival_rates)},
        "durations": {
            "outpatient": {
                "mean": instance.durations.outpatient_mean,
                "spread": instance.durations.outpatient_spread,
            },
            "emergency": {
                "low": instance.durations.emergency_low,
                "high": instance.durations.emergency_high,
            },
        },
        "penalties": {"emergency_wait_per_period": instance.emergency_penalty_rate},
    }


def instance_from_document(doc: Mapping[str, Any]) -> ProblemInstance:
    path = "instance"
    _get(doc, "schema_version", path, int)
    horizon = _get(doc, "horizon", path, int)
    interpreters = []
    for k, idoc in enumerate(_get(doc, "interpreters", path, list)):
        ipath = f"{path}.interpreters[{k}]"
        try:
            kind = InterpreterKind(_get(idoc, "kind", ipath, str))
        except ValueError as exc:
            raise FormatError(f"{ipath}.kind: {exc}") from None
        availability = tuple(bool(a) for a in _get(idoc, "availability", ipath, list))
        try:
            if kind is InterpreterKind.FULL_TIME:
                interpreters.append(
                    InterpreterProfile(
                        id=_get(idoc, "id", ipath, str),
                        kind=kind,
                        languages=frozenset(_get(idoc, "languages", ipath, list)),
                        availability=availability,
                        regular_time=_get(idoc, "regular_time", ipath, int),
                        overtime_rate=float(_get(idoc, "overtime_rate", ipath, (int, float))),
                    )
                )
            else:
                interpreters.append(
                    InterpreterProfile(
                        id=_get(idoc, "id", ipath, str),
                        kind=kind,
                        languages=frozenset(_get(idoc, "languages", ipath, list)),
                        availability=availability,
                        fixed_cost=float(_get(idoc, "fixed_cost", ipath, (int, float))),
                        covered_threshold=_get(idoc, "covered_threshold", ipath, int),
                        variable_rate=float(_get(idoc, "variable_rate", ipath, (int, float))),
                    )
                )
        except ValueError as exc:
            raise FormatError(f"{ipath}: {exc}") from None
    outpatients = tuple(
        _patient_from(pdoc, f"{path}.outpatients[{k}]")
        for k, pdoc in enumerate(_get(doc, "outpatients", path, list))
    )
    preassignments = []
    for k, pre in enumerate(_get(doc, "preassignments", path, list)):
        ppath = f"{path}.preassignments[{k}]"
        preassignments.append(
            InpatientPreAssignment(
                patient=_patient_from(_get(pre, "patient", ppath, dict), f"{ppath}.patient"),
                interpreter=_get(pre, "interpreter", ppath, str),
            )
        )
    ddoc = _get(doc, "durations", path, dict)
    out_doc = _get(ddoc, "outpatient", f"{path}.durations", dict)
    emg_doc = _get(ddoc, "emergency", f"{path}.durations", dict)
    durations = DurationModel(
        outpatient_mean=float(_get(out_doc, "mean", f"{path}.durations.outpatient", (int, float))),
        outpatient_spread=float(_get(out_doc, "spread", f"{path}.durations.outpatient", (int, float))),
        emergency_low=_get(emg_doc, "low", f"{path}.durations.emergency", int),
        emergency_high=_get(emg_doc, "high", f"{path}.durations.emergency", int),
    )
    penalties = _get(doc, "penalties", path, dict)
    try:
        return ProblemInstance(
            horizon=horizon,
            interpreters=tuple(interpreters),
            outpatients=outpatients,
            inpatient_preassignments=tuple(preassignments),
            arrival_rates={
                str(lang): float(rate) for lang, rate in _get(doc, "arrival_rates", path, dict).items()
            },
            durations=durations,
            emergency_penalty_rate=float(
                _get(penalties, "emergency_wait_per_period", f"{path}.penalties", (int, float))
            ),
            alpha=float(_get(doc, "alpha", path, (int, float))),
        )
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from None


def scenarios_document(scenarios: Sequence[Scenario], master_seed: int | None = None) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "master_seed": master_seed,
        "scenarios": [
            {
                "probability": s.probability,
                "emergency_patients": [_patient_doc(p) for p in s.emergency_patients],
                "outpatient_durations": {pid: s.outpatient_durations[pid] for pid in sorted(s.outpatient_durations)},
            }
            for s in scenarios
        ],
    }


def scenarios_from_document(doc: Mapping[str, Any]) -> tuple[Scenario, ...]:
    path = "scenarios"
    _get(doc, "schema_version", path, int)
    result = []
    for k, sdoc in enumerate(_get(doc, "scenarios", path, list)):
        spath = f"{path}[{k}]"
        probability = sdoc.get("probability")
        if probability is not None:
            probability = float(probability)
        result.append(
            Scenario(
                emergency_patients=tuple(
                    _patient_from(pdoc, f"{spath}.emergency_patients[{i}]")
                    for i, pdoc in enumerate(_get(sdoc, "emergency_patients", spath, list))
                ),
                outpatient_durations={
                    str(pid): int(dur)
                    for pid, dur in _get(sdoc, "outpatient_durations", spath, dict).items()
                },
                probability=probability,
            )
        )
    return tuple(result)


def solution_document(
    hiring: HiringDecision,
    algorithm: str,
    objective: float | None = None,
    seed: int | None = None,
) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "algorithm": algorithm,
        "order": list(hiring.order),
        "bits": [int(b) for b in hiring.bits],
        "objective": objective,
        "seed": seed,
    }


def solution_from_document(doc: Mapping[str, Any], instance: ProblemInstance) -> HiringDecision:
    path = "solution"
    _get(doc, "schema_version", path, int)
    template = group_part_timers(instance)
    order = tuple(_get(doc, "order", path, list))
    if order != template.order:
        raise FormatError(f"{path}.order: does not match the instance's part-timer ordering")
    bits = _get(doc, "bits", path, list)
    if len(bits) != len(template.bits):
        raise FormatError(f"{path}.bits: expected {len(template.bits)} bits, got {len(bits)}")
    return template.with_bits([bool(b) for b in bits])


def saa_report_document(report: SaaReport) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "num_scenarios": report.num_scenarios,
        "eval_scenarios": report.eval_scenarios,
        "num_replications": report.num_replications,
        "confidence": report.confidence,
        "per_replication": [
            {"bits": [int(b) for b in decision.bits], "objective": objective}
            for decision, objective in report.per_replication
        ],
        "g_hat": list(report.g_hat),
        "sigma_g": list(report.sigma_g),
        "lb_mean": report.lb_mean,
        "sigma_lb": report.sigma_lb,
        "m_star": report.m_star,
        "gap": report.gap,
        "gap_pct": report.gap_pct,
        "sigma_gap": report.sigma_gap,
        "ci_low": report.ci_low,
        "ci_high": report.ci_high,
        "gap_accepted": report.gap_accepted,
        "evaluator": report.evaluator,
        "best_bits": [int(b) for b in report.best_decision.bits],
    }


STATS_CSV_COLUMNS = (
    "mean_total",
    "std",
    "mean_wait",
    "sl_emergency",
    "sl_outpatient",
    "fixed",
    "variable",
    "overtime",
    "penalty",
)


def stats_csv_cells(stats: SimulationStats) -> list[str]:
    fixed, variable, overtime, penalty = stats.cost_breakdown_means
    return [
        repr(stats.mean_total),
        repr(stats.std_total),
        repr(stats.mean_wait),
        repr(stats.service_level_emergency),
        repr(stats.service_level_outpatient),
        repr(fixed),
        repr(variable),
        repr(overtime),
        repr(penalty),
    ]
