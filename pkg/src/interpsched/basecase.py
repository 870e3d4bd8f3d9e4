"""Seeded builder for the full-size reference instance.

Cost parameters are published as ranges, so per-interpreter values are seeded
uniform draws persisted in the instance file; downstream results are then
reproducible from the file alone.
"""
from __future__ import annotations

from .domain import (
    PatientClass,
    PatientRecord,
    ProblemInstance,
    full_time_interpreter,
    part_time_interpreter,
)
from .scenarios import RandomStream

BASE_SEED = 7
HORIZON = 24

ARRIVAL_RATES = {
    "Hmong": 0.13,
    "Russian": 0.013,
    "Somalian": 0.050,
    "Vietnamese": 0.022,
    "Spanish": 0.184,
}
FULL_TIME_COUNTS = {"Hmong": 6, "Russian": 1, "Somalian": 1, "Vietnamese": 1, "Spanish": 3}
PART_TIME_COUNTS = {"Hmong": 6, "Russian": 2, "Somalian": 1, "Vietnamese": 2, "Spanish": 10}
NUM_OUTPATIENTS = 14
OUTPATIENT_PENALTY = 15.0
EMERGENCY_PENALTY = 30.0
COVERED_THRESHOLD = 8
OVERTIME_RANGE = (13.0, 17.0)
FIXED_RANGE = (40.0, 60.0)
VARIABLE_RANGE = (7.0, 10.0)


def make_base_instance(seed: int = BASE_SEED) -> ProblemInstance:
    """The 12 full-timer / 22 part-timer day: five languages, 14 outpatients,
    Poisson emergency arrivals. The 22nd part-timer is bilingual
    (Hmong+Spanish), the two most demanded languages, making the hiring
    vector carry one multi-language group."""
    rng = RandomStream(seed, ("base-case", 0)).generator()

    def money(low: float, high: float) -> float:
        return round(float(rng.uniform(low, high)), 2)

    interpreters = []
    for language, count in FULL_TIME_COUNTS.items():
        for k in range(1, count + 1):
            interpreters.append(
                full_time_interpreter(
                    f"ft-{language.lower()}-{k}",
                    [language],
                    HORIZON,
                    overtime_rate=money(*OVERTIME_RANGE),
                )
            )
    for language, count in PART_TIME_COUNTS.items():
        for k in range(1, count + 1):
            interpreters.append(
                part_time_interpreter(
                    f"pt-{language.lower()}-{k}",
                    [language],
                    HORIZON,
                    fixed_cost=money(*FIXED_RANGE),
                    covered_threshold=COVERED_THRESHOLD,
                    variable_rate=money(*VARIABLE_RANGE),
                )
            )
    interpreters.append(
        part_time_interpreter(
            "pt-hmong-spanish-1",
            ["Hmong", "Spanish"],
            HORIZON,
            fixed_cost=money(*FIXED_RANGE),
            covered_threshold=COVERED_THRESHOLD,
            variable_rate=money(*VARIABLE_RANGE),
        )
    )

    languages = list(ARRIVAL_RATES)
    weights = [ARRIVAL_RATES[lang] for lang in languages]
    total = sum(weights)
    probabilities = [w / total for w in weights]
    outpatients = []
    for k in range(1, NUM_OUTPATIENTS + 1):
        language = languages[int(rng.choice(len(languages), p=probabilities))]
        arrival = int(rng.integers(1, HORIZON + 1))
        outpatients.append(
            PatientRecord(
                id=f"out-{k:02d}",
                patient_class=PatientClass.OUTPATIENT,
                language=language,
                arrival=arrival,
                penalty_rate=OUTPATIENT_PENALTY,
            )
        )

    return ProblemInstance(
        horizon=HORIZON,
        interpreters=tuple(interpreters),
        outpatients=tuple(outpatients),
        arrival_rates=dict(ARRIVAL_RATES),
        emergency_penalty_rate=EMERGENCY_PENALTY,
        alpha=2.0,
    )
