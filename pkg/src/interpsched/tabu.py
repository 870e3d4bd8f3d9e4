"""Tabu search over hiring vectors.

Candidates are generated by a two-swap move inside every language group, so a
move never changes the per-group hire counts; only diversification (a freshly
generated solution, accepted with a small probability each iteration) can.
Fitness is the greedy second-stage estimate over one scenario batch that is
fixed for the whole run, so comparisons between candidates are noise-free and
the best-seen trace is monotone.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .arrays import build_instance_view, build_scenario_view
from .domain import HiringDecision, ProblemInstance, Scenario
from .exact import (
    DEFAULT_MAX_PART_TIMERS,
    DEFAULT_MAX_PATIENTS,
    SizeGuardExceeded,
    solve_saa_exact,
)
from .greedy import DEFAULT_POLICY, fitness
from .scenarios import RandomStream, sample_batch

RANDOM_FALLBACK_CANDIDATES = 50


@dataclass(frozen=True)
class TsParams:
    """Tabu search knobs; the defaults are the tuned values plus a
    neighborhood size of 20."""

    iterations: int = 100
    tabu_length: int = 30
    diversification_prob: float = 0.05
    neighborhood_size: int = 20
    fitness_sample_size: int = 50
    init_sample_size: int = 5
    master_seed: int = 0
    policy: str = DEFAULT_POLICY
    allow_bit_flip: bool = False
    exact_max_patients: int = DEFAULT_MAX_PATIENTS
    exact_max_part_timers: int = DEFAULT_MAX_PART_TIMERS

    def __post_init__(self) -> None:
        if min(self.iterations, self.tabu_length, self.neighborhood_size) < 1:
            raise ValueError("iterations, tabu_length and neighborhood_size must be positive")
        if min(self.fitness_sample_size, self.init_sample_size) < 1:
            raise ValueError("sample sizes must be positive")
        if not 0.0 <= self.diversification_prob <= 1.0:
            raise ValueError("diversification_prob must be in [0, 1]")


class TabuMemory:
    """Fixed-capacity first-in-first-out memory of visited hiring vectors;
    membership is exact bit equality."""

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self._entries: deque[tuple[bool, ...]] = deque(maxlen=capacity)
        self._members: dict[tuple[bool, ...], int] = {}

    def __contains__(self, bits: tuple[bool, ...]) -> bool:
        return bits in self._members

    def __len__(self) -> int:
        return len(self._entries)

    def push(self, bits: tuple[bool, ...]) -> None:
        if len(self._entries) == self._entries.maxlen:
            oldest = self._entries[0]
            count = self._members[oldest] - 1
            if count:
                self._members[oldest] = count
            else:
                del self._members[oldest]
        self._entries.append(bits)
        self._members[bits] = self._members.get(bits, 0) + 1

    def entries(self) -> tuple[tuple[bool, ...], ...]:
        return tuple(self._entries)


@dataclass(frozen=True)
class TraceRow:
    iteration: int
    current_fitness: float
    best_fitness: float
    diversified: bool
    current_bits: tuple[bool, ...] = ()


@dataclass(frozen=True)
class TsResult:
    decision: HiringDecision
    best_fitness: float
    trace: tuple[TraceRow, ...]


def _fresh_solution(
    instance: ProblemInstance,
    params: TsParams,
    scenarios: Sequence[Scenario],
    stream: RandomStream,
) -> HiringDecision:
    """Solve the small sampled problem exactly when the guards allow;
    otherwise take the best of the all-false baseline plus 50 random vectors
    under greedy fitness."""
    try:
        decision, _ = solve_saa_exact(
            instance,
            scenarios,
            max_patients=params.exact_max_patients,
            max_part_timers=params.exact_max_part_timers,
        )
        return decision
    except SizeGuardExceeded:
        pass
    view = build_instance_view(instance)
    template = view.template
    rng = stream.generator()
    candidates = [template.bits]
    n_bits = len(template.bits)
    for _ in range(RANDOM_FALLBACK_CANDIDATES):
        candidates.append(tuple(bool(b) for b in rng.integers(0, 2, size=n_bits)))
    best_bits = None
    best_fit = float("inf")
    for bits in candidates:
        fit = fitness(instance, template.with_bits(bits), scenarios, policy=params.policy, view=view)
        if fit < best_fit or (fit == best_fit and (best_bits is None or bits < best_bits)):
            best_fit, best_bits = fit, bits
    return template.with_bits(best_bits)


def initial_solution(instance: ProblemInstance, params: TsParams) -> HiringDecision:
    """Starting point: the exact optimum of a small sampled problem, or the
    random-candidate fallback beyond the exact guards."""
    scenarios = sample_batch(instance, params.init_sample_size, params.master_seed, purpose="ts-init")
    return _fresh_solution(instance, params, scenarios, RandomStream(params.master_seed, ("ts-init-rand", 0)))


def neighbors(
    decision: HiringDecision,
    params: TsParams,
    stream: RandomStream,
) -> list[HiringDecision]:
    """Two-swap neighborhood: each candidate swaps one random position pair
    inside every group of size >= 2; duplicates and the input itself are
    dropped. With all groups of size 1 the neighborhood is empty and
    diversification is the only move."""
    rng = stream.generator()
    seen: set[tuple[bool, ...]] = {decision.bits}
    result: list[HiringDecision] = []
    swappable = [(lo, hi) for lo, hi in decision.group_boundaries if hi > lo]
    for _ in range(params.neighborhood_size):
        bits = list(decision.bits)
        for lo, hi in swappable:
            size = hi - lo + 1
            a, b = rng.choice(size, size=2, replace=False)
            i, j = lo + int(a), lo + int(b)
            bits[i], bits[j] = bits[j], bits[i]
        if params.allow_bit_flip and len(bits) and rng.random() < 0.5:
            flip = int(rng.integers(0, len(bits)))
            bits[flip] = not bits[flip]
        key = tuple(bits)
        if key not in seen:
            seen.add(key)
            result.append(decision.with_bits(key))
    return result


def run_ts(
    instance: ProblemInstance,
    params: TsParams,
    initial: Optional[HiringDecision] = None,
    fitness_scenarios: Optional[Sequence[Scenario]] = None,
) -> TsResult:
    """Run the search and return the best-seen decision, its fitness on the
    run's fixed scenario batch, and the per-iteration trace."""
    view = build_instance_view(instance)
    if fitness_scenarios is None:
        fitness_scenarios = sample_batch(
            instance, params.fitness_sample_size, params.master_seed, purpose="ts-fitness"
        )
    scenarios = list(fitness_scenarios)
    scenario_views = [build_scenario_view(view, instance, s) for s in scenarios]
    cache: dict[tuple[bool, ...], float] = {}

    def evaluate(decision: HiringDecision) -> float:
        key = decision.bits
        if key not in cache:
            cache[key] = fitness(
                instance, decision, scenarios, policy=params.policy, view=view, scenario_views=scenario_views
            )
        return cache[key]

    current = initial if initial is not None else initial_solution(instance, params)
    current_fit = evaluate(current)
    best, best_fit = current, current_fit
    memory = TabuMemory(params.tabu_length)
    memory.push(current.bits)
    diversify_rng = RandomStream(params.master_seed, ("ts-diversify-roll", 0)).generator()

    trace: list[TraceRow] = []
    for iteration in range(params.iterations):
        moved = False
        diversified = False
        if diversify_rng.random() < params.diversification_prob:
            batch = sample_batch(
                instance, params.init_sample_size, params.master_seed, purpose=f"ts-diversify-{iteration}"
            )
            candidate = _fresh_solution(
                instance, params, batch, RandomStream(params.master_seed, ("ts-diversify-rand", iteration))
            )
            if candidate.bits not in memory:
                current, current_fit = candidate, evaluate(candidate)
                memory.push(current.bits)
                moved = diversified = True
        if not moved:
            admissible = [
                n
                for n in neighbors(current, params, RandomStream(params.master_seed, ("ts-neighbors", iteration)))
                if n.bits not in memory
            ]
            if admissible:
                scored = sorted(((evaluate(n), n.bits) for n in admissible))
                current_fit, bits = scored[0]
                current = current.with_bits(bits)
                memory.push(current.bits)
        if current_fit < best_fit:
            best, best_fit = current, current_fit
        trace.append(
            TraceRow(
                iteration=iteration,
                current_fitness=current_fit,
                best_fitness=best_fit,
                diversified=diversified,
                current_bits=current.bits,
            )
        )
    return TsResult(decision=best, best_fitness=best_fit, trace=tuple(trace))


def trace_csv(trace: Iterable[TraceRow]) -> str:
    """Deterministic CSV rendering of a run trace."""
    lines = ["iteration,current_fitness,best_fitness,diversified"]
    for row in trace:
        lines.append(f"{row.iteration},{row.current_fitness!r},{row.best_fitness!r},{int(row.diversified)}")
    return "\n".join(lines) + "\n"
