"""Monte Carlo scenario sampling and the expected-value scenario.

Streams are keyed by (master seed, purpose tag, index), so any scenario can be
regenerated bit-exactly in isolation regardless of worker count or evaluation
order.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np

from .domain import PatientClass, PatientRecord, ProblemInstance, Scenario


def _purpose_tag(purpose: str) -> int:
    digest = hashlib.sha256(purpose.encode("utf-8")).digest()
    return int.from_bytes(digest[:4], "big")


@dataclass(frozen=True)
class RandomStream:
    """A derived, order-independent random stream."""

    master_seed: int
    stream_key: tuple[str, int]

    def generator(self) -> np.random.Generator:
        purpose, index = self.stream_key
        seq = np.random.SeedSequence(self.master_seed, spawn_key=(_purpose_tag(purpose), index))
        return np.random.default_rng(seq)

    def derived_seed(self) -> int:
        """A stable 63-bit integer seed derived from this stream."""
        purpose, index = self.stream_key
        seq = np.random.SeedSequence(self.master_seed, spawn_key=(_purpose_tag(purpose), index))
        return int(seq.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


def round_clamp_duration(value: float, horizon: int) -> int:
    """The outpatient duration transform: round to the nearest whole period,
    then clamp into [1, horizon]."""
    return min(max(int(round(value)), 1), horizon)


def sample_scenario(instance: ProblemInstance, stream: RandomStream) -> Scenario:
    """Draw one scenario: per-language per-period Poisson emergency arrivals
    with uniform integer durations, and a rounded-clamped normal duration for
    each outpatient (deterministic overrides are copied as-is).

    The returned probability is left unset; batch samplers fill it in.
    """
    rng = stream.generator()
    horizon = instance.horizon
    model = instance.durations
    emergencies: list[PatientRecord] = []
    for language in sorted(instance.arrival_rates):
        rate = instance.arrival_rates[language]
        if rate < 0:
            raise ValueError(f"negative arrival rate for {language!r}")
        if rate == 0:
            continue
        counts = rng.poisson(rate, size=horizon)
        for period_idx in range(horizon):
            for k in range(counts[period_idx]):
                duration = int(rng.integers(model.emergency_low, model.emergency_high + 1))
                emergencies.append(
                    PatientRecord(
                        id=f"emg-{language}-t{period_idx + 1}-{k}",
                        patient_class=PatientClass.EMERGENCY,
                        language=language,
                        arrival=period_idx + 1,
                        penalty_rate=instance.emergency_penalty_rate,
                        duration=duration,
                    )
                )
    outpatient_durations: dict[str, int] = {}
    for patient in instance.outpatients:
        if patient.duration is not None:
            outpatient_durations[patient.id] = patient.duration
        else:
            draw = rng.normal(model.outpatient_mean, model.outpatient_spread)
            outpatient_durations[patient.id] = round_clamp_duration(draw, horizon)
    return Scenario(
        emergency_patients=tuple(emergencies),
        outpatient_durations=outpatient_durations,
        probability=None,
    )


def sample_batch(
    instance: ProblemInstance,
    num_scenarios: int,
    master_seed: int,
    purpose: str = "sample",
) -> tuple[Scenario, ...]:
    """Sample ``num_scenarios`` scenarios, each on its own derived stream and
    each carrying probability 1/num_scenarios."""
    if num_scenarios < 1:
        raise ValueError("num_scenarios must be >= 1")
    probability = 1.0 / num_scenarios
    batch = []
    for index in range(num_scenarios):
        scenario = sample_scenario(instance, RandomStream(master_seed, (purpose, index)))
        batch.append(
            Scenario(
                emergency_patients=scenario.emergency_patients,
                outpatient_durations=scenario.outpatient_durations,
                probability=probability,
            )
        )
    return tuple(batch)


def expected_scenario(instance: ProblemInstance) -> Scenario:
    """The deterministic scenario with every random quantity replaced by its
    expectation: round(rate * horizon) emergencies per language spread evenly
    over the day, midpoint emergency durations, mean outpatient durations.

    Consumes no randomness.
    """
    horizon = instance.horizon
    model = instance.durations
    emergency_duration = round_clamp_duration((model.emergency_low + model.emergency_high) / 2.0, horizon)
    emergencies: list[PatientRecord] = []
    for language in sorted(instance.arrival_rates):
        rate = instance.arrival_rates[language]
        count = int(round(rate * horizon))
        for i in range(1, count + 1):
            arrival = math.ceil((2 * i - 1) * horizon / (2 * count))
            emergencies.append(
                PatientRecord(
                    id=f"emg-{language}-mean-{i}",
                    patient_class=PatientClass.EMERGENCY,
                    language=language,
                    arrival=max(1, min(arrival, horizon)),
                    penalty_rate=instance.emergency_penalty_rate,
                    duration=emergency_duration,
                )
            )
    outpatient_durations = {
        patient.id: patient.duration
        if patient.duration is not None
        else round_clamp_duration(model.outpatient_mean, horizon)
        for patient in instance.outpatients
    }
    return Scenario(
        emergency_patients=tuple(emergencies),
        outpatient_durations=outpatient_durations,
        probability=1.0,
    )
