"""Canonical fixtures: the tiny deterministic instance used across the test
suite, and the exhaustively solvable instance family that certifies the exact
solver."""
from __future__ import annotations

import hashlib
import inspect
import warnings
from dataclasses import dataclass
from . import bruteforce
from .domain import (
    DurationModel,
    InpatientPreAssignment,
    PatientClass,
    PatientRecord,
    ProblemInstance,
    Scenario,
    full_time_interpreter,
    part_time_interpreter,
    simplify_instance,
)
from .scenarios import RandomStream, sample_scenario

FAMILY_BUDGET = dict(max_interpreters=3, max_patients=4, max_horizon=6, max_scenarios=2)


def make_t1() -> ProblemInstance:
    """Four periods, one language, one full-timer and two part-timers, two
    outpatients with fixed durations: small enough to enumerate exhaustively,
    rich enough to make hiring a real trade-off."""
    horizon = 4
    return ProblemInstance(
        horizon=horizon,
        interpreters=(
            full_time_interpreter("f1", ["L1"], horizon, overtime_rate=10.0, regular_time=2),
            part_time_interpreter("p1", ["L1"], horizon, fixed_cost=20.0, covered_threshold=1, variable_rate=5.0),
            part_time_interpreter("p2", ["L1"], horizon, fixed_cost=30.0, covered_threshold=1, variable_rate=5.0),
        ),
        outpatients=(
            PatientRecord("n1", PatientClass.OUTPATIENT, "L1", arrival=1, penalty_rate=15.0, duration=2),
            PatientRecord("n2", PatientClass.OUTPATIENT, "L1", arrival=2, penalty_rate=15.0, duration=1),
        ),
        arrival_rates={"L1": 0.0},
        emergency_penalty_rate=30.0,
        alpha=2.0,
    )


def t1_scenario() -> Scenario:
    """T1's single scenario (its uncertainty is degenerate)."""
    return Scenario(
        emergency_patients=(),
        outpatient_durations={"n1": 2, "n2": 1},
        probability=1.0,
    )


def make_reduced() -> ProblemInstance:
    """Guard-compatible instance with real uncertainty: 12 periods, one
    language, one full-timer plus two part-timers, four outpatients with
    model-drawn durations and a light emergency stream (about five patients
    expected per day). Demand comfortably exceeds the cheap capacity, so the
    realized service time drives the cost and the replication optima carry
    the sampling noise."""
    horizon = 12
    return ProblemInstance(
        horizon=horizon,
        interpreters=(
            full_time_interpreter("f1", ["L1"], horizon, overtime_rate=13.0, regular_time=4),
            part_time_interpreter("p1", ["L1"], horizon, fixed_cost=15.0, covered_threshold=2, variable_rate=6.0),
            part_time_interpreter("p2", ["L1"], horizon, fixed_cost=18.0, covered_threshold=2, variable_rate=7.0),
        ),
        outpatients=(
            PatientRecord("n1", PatientClass.OUTPATIENT, "L1", arrival=1, penalty_rate=15.0),
            PatientRecord("n2", PatientClass.OUTPATIENT, "L1", arrival=3, penalty_rate=15.0),
            PatientRecord("n3", PatientClass.OUTPATIENT, "L1", arrival=6, penalty_rate=15.0),
            PatientRecord("n4", PatientClass.OUTPATIENT, "L1", arrival=9, penalty_rate=15.0),
        ),
        arrival_rates={"L1": 0.08},
        durations=DurationModel(7.20, 5.25, 6, 12),
        emergency_penalty_rate=30.0,
        alpha=2.0,
    )


@dataclass(frozen=True)
class FamilyLimits:
    max_interpreters: int = 3
    max_patients: int = 4
    max_horizon: int = 6
    max_scenarios: int = 2

    def validate(self) -> None:
        if (
            self.max_interpreters > FAMILY_BUDGET["max_interpreters"]
            or self.max_patients > FAMILY_BUDGET["max_patients"]
            or self.max_horizon > FAMILY_BUDGET["max_horizon"]
            or self.max_scenarios > FAMILY_BUDGET["max_scenarios"]
        ):
            raise ValueError(f"limits exceed the exhaustive-enumeration budget {FAMILY_BUDGET}")
        if min(self.max_interpreters, self.max_patients, self.max_horizon, self.max_scenarios) < 1:
            raise ValueError("limits must be positive")


@dataclass(frozen=True)
class FamilyEntry:
    """One instance with its sampled scenarios and brute-force optimum."""

    name: str
    instance: ProblemInstance
    scenarios: tuple[Scenario, ...]
    optimum_bits: tuple[bool, ...]
    optimum_value: float
    seed: int
    oracle_hash: str


def oracle_version_hash() -> str:
    """Hash of the enumeration oracle's source, so stored optima can detect
    drift."""
    source = inspect.getsource(bruteforce)
    return hashlib.sha256(source.encode("utf-8")).hexdigest()[:16]


def _sample_bounded_scenarios(
    instance: ProblemInstance, count: int, seed: int, max_patients: int
) -> tuple[Scenario, ...]:
    """Sample scenarios whose total patient count stays within the family
    budget, skipping (deterministically) the rare oversized draws."""
    scenarios = []
    index = 0
    attempts = 0
    while len(scenarios) < count:
        if attempts > 200:
            raise RuntimeError("could not sample enough in-budget scenarios")
        scenario = sample_scenario(instance, RandomStream(seed, ("family", index)))
        index += 1
        attempts += 1
        if len(scenario.patients(instance)) <= max_patients:
            scenarios.append(scenario)
    probability = 1.0 / count
    return tuple(
        Scenario(s.emergency_patients, s.outpatient_durations, probability) for s in scenarios
    )


def _grid_instances(limits: FamilyLimits, seed: int) -> list[tuple[str, ProblemInstance, int]]:
    """A seeded grid of raw instances varying rosters, costs, penalties,
    availabilities and language mixes. Every instance fits the limits after
    simplification; scenario counts alternate 1 and 2."""
    rng = RandomStream(seed, ("family-grid", 0)).generator()
    out: list[tuple[str, ProblemInstance, int]] = []

    def seeded_money(low: int, high: int) -> float:
        return float(rng.integers(low, high + 1))

    rosters = []
    if limits.max_interpreters >= 2:
        rosters.append(("ft-pt", 1, 1))
        rosters.append(("pt-pt", 0, 2))
        rosters.append(("ft-ft", 2, 0))
    if limits.max_interpreters >= 3:
        rosters.append(("ft-2pt", 1, 2))
        rosters.append(("2ft-pt", 2, 1))

    horizons = sorted({min(4, limits.max_horizon), limits.max_horizon})
    patient_counts = sorted({min(2, limits.max_patients), min(3, limits.max_patients), limits.max_patients})
    language_mixes = (["L1"], ["L1", "L2"])

    index = 0
    for horizon in horizons:
        for roster_name, n_full, n_part in rosters:
            for n_patients in patient_counts:
                for languages in language_mixes:
                    index += 1
                    # keep the brute-force cost bounded: the largest patient
                    # count only runs on small rosters or the short horizon
                    if n_patients >= 4 and horizon > 4 and n_full + n_part > 2:
                        continue
                    multi_lingual = len(languages) > 1 and rng.random() < 0.5
                    interpreters = []
                    roster_slot = 0
                    for f in range(n_full):
                        langs = [languages[roster_slot % len(languages)]]
                        roster_slot += 1
                        if multi_lingual and f == 0:
                            langs = list(languages)
                        availability = [True] * horizon
                        if rng.random() < 0.3:
                            availability[int(rng.integers(0, horizon))] = False
                        interpreters.append(
                            full_time_interpreter(
                                f"ft{f + 1}",
                                langs,
                                horizon,
                                overtime_rate=seeded_money(8, 20),
                                regular_time=int(rng.integers(1, horizon + 1)),
                                availability=availability,
                            )
                        )
                    for p in range(n_part):
                        langs = [languages[roster_slot % len(languages)]]
                        roster_slot += 1
                        if multi_lingual and p == n_part - 1:
                            langs = list(languages)
                        interpreters.append(
                            part_time_interpreter(
                                f"pt{p + 1}",
                                langs,
                                horizon,
                                fixed_cost=seeded_money(15, 60),
                                covered_threshold=int(rng.integers(0, 3)),
                                variable_rate=seeded_money(3, 9),
                            )
                        )
                    patients = []
                    for n in range(n_patients):
                        fixed_duration = int(rng.integers(1, max(2, horizon // 2) + 1)) if rng.random() < 0.7 else None
                        patients.append(
                            PatientRecord(
                                f"n{n + 1}",
                                PatientClass.OUTPATIENT,
                                languages[n % len(languages)],
                                arrival=int(rng.integers(1, horizon + 1)),
                                penalty_rate=float(rng.choice([10, 15, 30])),
                                duration=fixed_duration,
                            )
                        )
                    # a few entries carry emergency arrivals; patients are
                    # kept down so sampled scenarios stay inside the budget
                    rates = {lang: 0.0 for lang in languages}
                    if n_patients <= 2 and rng.random() < 0.4:
                        rates[languages[0]] = 0.1
                    instance = ProblemInstance(
                        horizon=horizon,
                        interpreters=tuple(interpreters),
                        outpatients=tuple(patients),
                        arrival_rates=rates,
                        durations=make_t1().durations,
                        emergency_penalty_rate=30.0,
                        alpha=2.0,
                    )
                    n_scen = 1 if index % 2 else min(2, limits.max_scenarios)
                    out.append((f"{roster_name}-T{horizon}-n{n_patients}-{index:03d}", instance, n_scen))

    # dense entries: early arrivals, one language, everyone compatible, so
    # the assignment space is as large as the budget allows
    if limits.max_interpreters >= 3 and limits.max_patients >= 4 and limits.max_horizon >= 6:
        horizon = 6
        for variant, (wr, threshold) in enumerate([(2, 1), (4, 0)]):
            dense = ProblemInstance(
                horizon=horizon,
                interpreters=(
                    full_time_interpreter("ft1", ["L1"], horizon, overtime_rate=12.0, regular_time=wr),
                    part_time_interpreter("pt1", ["L1"], horizon, fixed_cost=22.0, covered_threshold=threshold, variable_rate=6.0),
                    part_time_interpreter("pt2", ["L1"], horizon, fixed_cost=35.0, covered_threshold=threshold, variable_rate=4.0),
                ),
                outpatients=tuple(
                    PatientRecord(
                        f"n{k + 1}",
                        PatientClass.OUTPATIENT,
                        "L1",
                        arrival=1 + (k % 2),
                        penalty_rate=float(15 + 15 * (k % 2)),
                        duration=(2, 4, 3, 5)[k],
                    )
                    for k in range(4)
                ),
                arrival_rates={"L1": 0.0},
                alpha=2.0,
            )
            out.append((f"dense-{variant + 1:03d}", dense, 1 + variant % limits.max_scenarios))

    # one entry with an uncovered patient language: that patient is
    # structurally unserved and charged the alpha*T - arrival wait
    if limits.max_patients >= 2:
        horizon = min(4, limits.max_horizon)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            uncovered = ProblemInstance(
                horizon=horizon,
                interpreters=(
                    full_time_interpreter("ft1", ["L1"], horizon, overtime_rate=10.0, regular_time=2),
                    part_time_interpreter("pt1", ["L1"], horizon, fixed_cost=25.0, covered_threshold=1, variable_rate=5.0),
                ),
                outpatients=(
                    PatientRecord("n1", PatientClass.OUTPATIENT, "L1", arrival=1, penalty_rate=15.0, duration=2),
                    PatientRecord("n2", PatientClass.OUTPATIENT, "L9", arrival=2, penalty_rate=10.0, duration=1),
                ),
                arrival_rates={"L1": 0.0},
                alpha=2.0,
            )
        out.append(("uncovered-001", uncovered, 1))

    # one entry exercises the simplification path: a pre-assigned full-timer
    # and inpatient that must be stripped before solving
    if limits.max_interpreters >= 2:
        horizon = min(4, limits.max_horizon)
        raw = ProblemInstance(
            horizon=horizon,
            interpreters=(
                full_time_interpreter("ft1", ["L1"], horizon, overtime_rate=12.0, regular_time=2),
                full_time_interpreter("ft2", ["L1"], horizon, overtime_rate=9.0, regular_time=2),
                part_time_interpreter("pt1", ["L1"], horizon, fixed_cost=18.0, covered_threshold=1, variable_rate=4.0),
            ),
            outpatients=(
                PatientRecord("n1", PatientClass.OUTPATIENT, "L1", arrival=1, penalty_rate=15.0, duration=2),
                PatientRecord("n2", PatientClass.OUTPATIENT, "L1", arrival=2, penalty_rate=10.0, duration=2),
            ),
            inpatient_preassignments=(
                InpatientPreAssignment(
                    PatientRecord("in1", PatientClass.INPATIENT, "L1", arrival=1, penalty_rate=15.0, duration=horizon),
                    "ft2",
                ),
            ),
            arrival_rates={"L1": 0.0},
            alpha=2.0,
        )
        out.append(("preassigned-001", simplify_instance(raw), 1))
    return out


def generate_fixture_family(limits: FamilyLimits | None = None, seed: int = 20240) -> list[FamilyEntry]:
    """Build the seeded instance family with brute-force optima attached.

    T1 is always the first entry. Reproducible for a fixed seed; every stored
    optimum comes straight from the no-pruning enumerator.
    """
    limits = limits if limits is not None else FamilyLimits()
    limits.validate()
    oracle = oracle_version_hash()
    entries: list[FamilyEntry] = []

    t1 = make_t1()
    decision, value = bruteforce.brute_force_saa(t1, [t1_scenario()])
    entries.append(
        FamilyEntry(
            name="t1",
            instance=t1,
            scenarios=(t1_scenario(),),
            optimum_bits=decision.bits,
            optimum_value=value,
            seed=seed,
            oracle_hash=oracle,
        )
    )

    for name, instance, n_scen in _grid_instances(limits, seed):
        scenarios = _sample_bounded_scenarios(instance, n_scen, seed, limits.max_patients)
        decision, value = bruteforce.brute_force_saa(instance, scenarios)
        entries.append(
            FamilyEntry(
                name=name,
                instance=instance,
                scenarios=scenarios,
                optimum_bits=decision.bits,
                optimum_value=value,
                seed=seed,
                oracle_hash=oracle,
            )
        )
    return entries
