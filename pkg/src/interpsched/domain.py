"""Domain types for the daily interpreter staffing-and-scheduling problem.

All types are immutable value objects; operations on them are pure, so
instances, scenarios and decisions can be shared freely across workers.
"""
from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field, replace
from typing import Mapping, Optional, Sequence

LanguageId = str


class InterpreterKind(enum.Enum):
    FULL_TIME = "full_time"
    PART_TIME = "part_time"


class PatientClass(enum.Enum):
    INPATIENT = "inpatient"
    OUTPATIENT = "outpatient"
    EMERGENCY = "emergency"


@dataclass(frozen=True)
class InterpreterProfile:
    """One interpreter: identity, kind, languages, availability and pay terms.

    Full-timers carry ``regular_time`` (periods paid for already) and an
    ``overtime_rate``; part-timers carry a ``fixed_cost`` covering service up
    to ``covered_threshold`` periods plus a ``variable_rate`` beyond it.
    """

    id: str
    kind: InterpreterKind
    languages: frozenset[LanguageId]
    availability: tuple[bool, ...]
    regular_time: Optional[int] = None
    overtime_rate: Optional[float] = None
    fixed_cost: Optional[float] = None
    covered_threshold: Optional[int] = None
    variable_rate: Optional[float] = None

    def __post_init__(self) -> None:
        if not self.languages:
            raise ValueError(f"interpreter {self.id!r}: languages must be non-empty")
        full_fields = (self.regular_time, self.overtime_rate)
        part_fields = (self.fixed_cost, self.covered_threshold, self.variable_rate)
        if self.kind is InterpreterKind.FULL_TIME:
            if any(v is None for v in full_fields) or any(v is not None for v in part_fields):
                raise ValueError(f"full-timer {self.id!r}: needs regular_time and overtime_rate only")
            if self.regular_time < 0 or self.overtime_rate < 0:
                raise ValueError(f"full-timer {self.id!r}: negative pay terms")
        else:
            if any(v is None for v in part_fields) or any(v is not None for v in full_fields):
                raise ValueError(
                    f"part-timer {self.id!r}: needs fixed_cost, covered_threshold and variable_rate only"
                )
            if self.fixed_cost < 0 or self.covered_threshold < 0 or self.variable_rate < 0:
                raise ValueError(f"part-timer {self.id!r}: negative pay terms")

    @property
    def is_full_time(self) -> bool:
        return self.kind is InterpreterKind.FULL_TIME


@dataclass(frozen=True)
class PatientRecord:
    """A patient needing interpretation: class, language, arrival, penalty.

    ``duration`` is set when it is known up front (inpatients always;
    outpatients optionally, as a deterministic override of the duration
    model). Emergency records carry their realized duration and exist only
    inside scenarios.
    """

    id: str
    patient_class: PatientClass
    language: LanguageId
    arrival: int
    penalty_rate: float
    duration: Optional[int] = None

    def __post_init__(self) -> None:
        if self.arrival < 1:
            raise ValueError(f"patient {self.id!r}: arrival must be >= 1")
        if self.penalty_rate < 0:
            raise ValueError(f"patient {self.id!r}: negative penalty rate")
        if self.duration is not None and self.duration < 1:
            raise ValueError(f"patient {self.id!r}: duration must be >= 1")


@dataclass(frozen=True)
class InpatientPreAssignment:
    """An inpatient together with the interpreter reserved for them all day."""

    patient: PatientRecord
    interpreter: str

    def __post_init__(self) -> None:
        if self.patient.patient_class is not PatientClass.INPATIENT:
            raise ValueError("pre-assignment patient must be an inpatient")


@dataclass(frozen=True)
class DurationModel:
    """Session-duration distributions: truncated-rounded normal for
    outpatients, discrete uniform for emergency patients."""

    outpatient_mean: float
    outpatient_spread: float
    emergency_low: int
    emergency_high: int

    def __post_init__(self) -> None:
        if self.outpatient_mean <= 0:
            raise ValueError("outpatient duration mean must be > 0")
        if self.emergency_low < 1 or self.emergency_high < self.emergency_low:
            raise ValueError("emergency duration range must satisfy 1 <= low <= high")


@dataclass(frozen=True)
class ProblemInstance:
    """One day's staffing-and-scheduling problem.

    ``alpha`` scales the horizon into the unserved-wait value alpha*T - arrival;
    it must exceed 1 so that not serving a patient always costs more than any
    served wait.
    """

    horizon: int
    interpreters: tuple[InterpreterProfile, ...]
    outpatients: tuple[PatientRecord, ...]
    inpatient_preassignments: tuple[InpatientPreAssignment, ...] = ()
    arrival_rates: Mapping[LanguageId, float] = field(default_factory=dict)
    durations: DurationModel = DurationModel(7.20, 5.25, 6, 12)
    emergency_penalty_rate: float = 30.0
    alpha: float = 2.0

    def __post_init__(self) -> None:
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        if self.alpha <= 1:
            raise ValueError("alpha must be > 1")
        ids = [itp.id for itp in self.interpreters]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate interpreter ids")
        pids = [p.id for p in self.outpatients]
        if len(set(pids)) != len(pids):
            raise ValueError("duplicate outpatient ids")
        for itp in self.interpreters:
            if len(itp.availability) != self.horizon:
                raise ValueError(f"interpreter {itp.id!r}: availability length != horizon")
        for pat in self.outpatients:
            if pat.patient_class is not PatientClass.OUTPATIENT:
                raise ValueError(f"patient {pat.id!r}: outpatients list holds a non-outpatient")
            if pat.arrival > self.horizon:
                raise ValueError(f"patient {pat.id!r}: arrival beyond horizon")
        for rate in self.arrival_rates.values():
            if rate < 0:
                raise ValueError("negative arrival rate")
        if self.emergency_penalty_rate < 0:
            raise ValueError("negative emergency penalty rate")
        spoken = set().union(*(itp.languages for itp in self.interpreters)) if self.interpreters else set()
        needed = {p.language for p in self.outpatients}
        needed.update(lang for lang, rate in self.arrival_rates.items() if rate > 0)
        uncovered = needed - spoken
        if uncovered:
            warnings.warn(
                f"no interpreter speaks: {', '.join(sorted(uncovered))}",
                stacklevel=2,
            )

    def epsilon_bound(self, num_scenarios: int, max_patients: int) -> float:
        """Largest admissible small constant for the hire-activation coupling:
        1 / (horizon * num_scenarios * max_patients)."""
        if num_scenarios < 1 or max_patients < 1:
            raise ValueError("num_scenarios and max_patients must be >= 1")
        return 1.0 / (self.horizon * num_scenarios * max_patients)

    @property
    def full_timers(self) -> tuple[InterpreterProfile, ...]:
        return tuple(i for i in self.interpreters if i.is_full_time)

    @property
    def part_timers(self) -> tuple[InterpreterProfile, ...]:
        return tuple(i for i in self.interpreters if not i.is_full_time)

    def interpreter_by_id(self, interpreter_id: str) -> InterpreterProfile:
        for itp in self.interpreters:
            if itp.id == interpreter_id:
                return itp
        raise KeyError(interpreter_id)


@dataclass(frozen=True)
class Scenario:
    """One realization of the uncertain day: emergency arrivals with realized
    durations, and realized outpatient durations."""

    emergency_patients: tuple[PatientRecord, ...]
    outpatient_durations: Mapping[str, int]
    probability: Optional[float] = None

    def __post_init__(self) -> None:
        for pat in self.emergency_patients:
            if pat.patient_class is not PatientClass.EMERGENCY:
                raise ValueError("emergency_patients holds a non-emergency record")
            if pat.duration is None:
                raise ValueError(f"emergency {pat.id!r}: realized duration missing")
        for pid, dur in self.outpatient_durations.items():
            if dur < 1:
                raise ValueError(f"outpatient {pid!r}: realized duration must be >= 1")

    def patients(self, instance: ProblemInstance) -> tuple[PatientRecord, ...]:
        """All patients of this scenario in canonical order: instance
        outpatients first, then emergencies."""
        return instance.outpatients + self.emergency_patients

    def realized_duration(self, patient: PatientRecord) -> int:
        if patient.patient_class is PatientClass.EMERGENCY:
            return patient.duration  # type: ignore[return-value]
        dur = self.outpatient_durations.get(patient.id)
        if dur is None:
            raise KeyError(f"no realized duration for outpatient {patient.id!r}")
        return dur


@dataclass(frozen=True)
class HiringDecision:
    """First-stage decision: one hire bit per part-timer in canonical order.

    Canonical order groups part-timers by identical language set; group
    boundaries are inclusive (start, end) index pairs, one per group.
    """

    bits: tuple[bool, ...]
    group_boundaries: tuple[tuple[int, int], ...]
    order: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.bits) != len(self.order):
            raise ValueError("bits and order lengths differ")
        covered = [idx for lo, hi in self.group_boundaries for idx in range(lo, hi + 1)]
        if covered != list(range(len(self.bits))):
            raise ValueError("group boundaries must partition the bit positions")

    def with_bits(self, bits: Sequence[bool]) -> "HiringDecision":
        if len(bits) != len(self.bits):
            raise ValueError("bit length mismatch")
        return replace(self, bits=tuple(bool(b) for b in bits))

    def hired_ids(self) -> tuple[str, ...]:
        return tuple(pid for pid, bit in zip(self.order, self.bits) if bit)

    def is_hired(self, part_timer_id: str) -> bool:
        try:
            return self.bits[self.order.index(part_timer_id)]
        except ValueError:
            raise KeyError(part_timer_id) from None

    def hired_count(self) -> int:
        return sum(self.bits)


UNSERVED = None


@dataclass(frozen=True)
class Assignment:
    """A patient's outcome under one scenario: an interpreter and a start
    period, or unserved (interpreter None)."""

    patient: str
    interpreter: Optional[str]
    start: Optional[int] = None

    def __post_init__(self) -> None:
        if (self.interpreter is None) != (self.start is None):
            raise ValueError(f"assignment for {self.patient!r}: interpreter and start must be set together")

    @property
    def served(self) -> bool:
        return self.interpreter is not None


@dataclass(frozen=True)
class Schedule:
    """Per-scenario schedule: one assignment per patient.

    A session started at t with duration d occupies periods t..min(T, t+d-1);
    sessions of one interpreter must not overlap and the interpreter must be
    available over the occupied span. The full duration counts toward
    workload and pay even when the session runs past the last period.
    """

    assignments: tuple[Assignment, ...]

    def by_patient(self) -> dict[str, Assignment]:
        return {a.patient: a for a in self.assignments}


@dataclass(frozen=True)
class ScheduleCosting:
    """Second-stage costing of one schedule, split into its components.

    Waits: served patients wait start - arrival; unserved patients are charged
    alpha*horizon - arrival periods.
    """

    per_patient_wait: Mapping[str, float]
    per_interpreter_load: Mapping[str, int]
    per_interpreter_overtime: Mapping[str, int]
    per_parttimer_extra: Mapping[str, int]
    fixed_cost: float
    variable_cost: float
    overtime_cost: float
    penalty_cost: float

    @property
    def total(self) -> float:
        return self.fixed_cost + self.variable_cost + self.overtime_cost + self.penalty_cost


def derive_skill(interpreter: InterpreterProfile, patient: PatientRecord) -> bool:
    """True iff the interpreter speaks the patient's language. Availability is
    deliberately not considered here; it is a separate constraint."""
    return patient.language in interpreter.languages


def simplify_instance(raw: ProblemInstance) -> ProblemInstance:
    """Drop all inpatients and the interpreters pre-assigned to them.

    Idempotent; the input instance is left untouched.
    """
    roster = {itp.id for itp in raw.interpreters}
    seen_interp: set[str] = set()
    seen_patients: set[str] = set()
    for pre in raw.inpatient_preassignments:
        if pre.interpreter not in roster:
            raise ValueError(f"unknown interpreter id {pre.interpreter!r} in pre-assignment")
        if pre.interpreter in seen_interp:
            raise ValueError(f"interpreter {pre.interpreter!r} pre-assigned twice")
        if pre.patient.id in seen_patients:
            raise ValueError(f"inpatient {pre.patient.id!r} pre-assigned twice")
        if not derive_skill(raw.interpreter_by_id(pre.interpreter), pre.patient):
            raise ValueError(
                f"pre-assigned interpreter {pre.interpreter!r} does not speak {pre.patient.language!r}"
            )
        seen_interp.add(pre.interpreter)
        seen_patients.add(pre.patient.id)
    if not raw.inpatient_preassignments:
        return raw
    kept = tuple(itp for itp in raw.interpreters if itp.id not in seen_interp)
    return replace(raw, interpreters=kept, inpatient_preassignments=())


def _group_key(languages: frozenset[LanguageId]) -> tuple[int, tuple[str, ...]]:
    return (len(languages), tuple(sorted(languages)))


def group_part_timers(instance: ProblemInstance) -> HiringDecision:
    """Canonical all-false hiring template for a simplified instance.

    Part-timers with identical language sets form contiguous groups;
    single-language groups come first, then larger sets, lexicographically by
    sorted labels; within a group, ascending fixed cost then id.
    """
    groups: dict[tuple[int, tuple[str, ...]], list[InterpreterProfile]] = {}
    for itp in instance.part_timers:
        groups.setdefault(_group_key(itp.languages), []).append(itp)
    order: list[str] = []
    boundaries: list[tuple[int, int]] = []
    for key in sorted(groups):
        members = sorted(groups[key], key=lambda itp: (itp.fixed_cost, itp.id))
        lo = len(order)
        order.extend(itp.id for itp in members)
        boundaries.append((lo, len(order) - 1))
    return HiringDecision(
        bits=tuple(False for _ in order),
        group_boundaries=tuple(boundaries),
        order=tuple(order),
    )


def full_time_interpreter(
    interpreter_id: str,
    languages: Sequence[LanguageId],
    horizon: int,
    overtime_rate: float,
    regular_time: Optional[int] = None,
    availability: Optional[Sequence[bool]] = None,
) -> InterpreterProfile:
    """Full-timer builder; regular time defaults to the whole horizon and
    availability to every period."""
    return InterpreterProfile(
        id=interpreter_id,
        kind=InterpreterKind.FULL_TIME,
        languages=frozenset(languages),
        availability=tuple(availability) if availability is not None else (True,) * horizon,
        regular_time=regular_time if regular_time is not None else horizon,
        overtime_rate=overtime_rate,
    )


def part_time_interpreter(
    interpreter_id: str,
    languages: Sequence[LanguageId],
    horizon: int,
    fixed_cost: float,
    covered_threshold: int,
    variable_rate: float,
    availability: Optional[Sequence[bool]] = None,
) -> InterpreterProfile:
    """Part-timer builder; availability defaults to every period."""
    return InterpreterProfile(
        id=interpreter_id,
        kind=InterpreterKind.PART_TIME,
        languages=frozenset(languages),
        availability=tuple(availability) if availability is not None else (True,) * horizon,
        fixed_cost=fixed_cost,
        covered_threshold=covered_threshold,
        variable_rate=variable_rate,
    )
