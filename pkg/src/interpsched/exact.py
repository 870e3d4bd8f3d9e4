"""Exact optimization of the sampled problem at desk scale.

Once the hiring vector is fixed, scenarios decouple into independent
single-scenario scheduling subproblems; each is solved by depth-first branch
and bound over patients in arrival order, and hiring vectors are enumerated in
Gray-code order. Size guards keep this solver in its role as an auditable
oracle; callers beyond the guards should use the greedy heuristic and tabu
search instead.
"""
from __future__ import annotations

import numpy as np

from .arrays import InstanceView, ScenarioView, build_instance_view, build_scenario_view
from .domain import HiringDecision, ProblemInstance, Scenario, Schedule
from .greedy import greedy_assign_view, schedule_from_arrays

MAX_EXACT_HORIZON = 24
DEFAULT_MAX_PATIENTS = 10
DEFAULT_MAX_PART_TIMERS = 12


class SizeGuardExceeded(RuntimeError):
    """The problem is beyond the exact solver's configured desk scale."""


def _branch_order(sv: ScenarioView) -> list[int]:
    return sorted(range(len(sv.patient_ids)), key=lambda p: (int(sv.arrival[p]), p))


class _SearchSpace:
    """Shared option tables and incremental cost arithmetic for one
    (instance view, hired vector, scenario view) triple.

    Options are precomputed per patient (skill, hiring, arrival, availability
    over the occupied span, horizon truncation); only interpreter-overlap is
    checked during the search. A load-relaxation lower bound prices the
    service time still to be absorbed.
    """

    def __init__(self, view: InstanceView, hired: np.ndarray, sv: ScenarioView):
        self.view = view
        self.sv = sv
        self.n_interp = len(view.interpreter_ids)
        self.n_full = view.n_full_time
        self.horizon = view.horizon
        self.alpha_horizon = view.alpha_horizon
        self.hired = [bool(h) for h in hired]
        self.arrival = [int(a) for a in sv.arrival]
        self.duration = [int(d) for d in sv.duration]
        self.penalty = [float(w) for w in sv.penalty]
        plang = [int(m) for m in sv.lang_mask]
        ilang = [int(m) for m in view.lang_mask]
        self.regular_time = [float(x) for x in view.regular_time]
        self.overtime_rate = [float(x) for x in view.overtime_rate]
        self.covered_threshold = [float(x) for x in view.covered_threshold]
        self.variable_rate = [float(x) for x in view.variable_rate]
        self.order = _branch_order(sv)

        n_pat = len(self.arrival)
        # static option tables: (interpreter, start, truncated end, wait cost)
        self.options_canonical: list[list[tuple[int, int, int, float]]] = []
        self.options_cheap_first: list[list[tuple[int, int, int, float]]] = []
        for p in range(n_pat):
            dur = self.duration[p]
            rows: list[tuple[int, int, int, float]] = []
            for i in range(self.n_interp):
                if not self.hired[i] or not (plang[p] & ilang[i]):
                    continue
                for start in range(self.arrival[p], self.horizon + 1):
                    if not view.avail[i, start - 1]:
                        continue
                    end = min(self.horizon, start + dur - 1)
                    if end > view.span_end[i, start - 1]:
                        continue
                    rows.append((i, start, end, self.penalty[p] * (start - self.arrival[p])))
            self.options_canonical.append(rows)
            self.options_cheap_first.append(sorted(rows, key=lambda row: (row[3], row[0], row[1])))

        self.unserved_cost = [
            self.penalty[p] * (self.alpha_horizon - self.arrival[p]) for p in range(n_pat)
        ]
        # suffix service time along the branch order, for the load bound
        self.suffix_duration = [0.0] * (n_pat + 1)
        for depth in range(n_pat - 1, -1, -1):
            self.suffix_duration[depth] = self.suffix_duration[depth + 1] + self.duration[self.order[depth]]
        # cheapest unit price of any future service time: every unit beyond
        # the interpreters' cheap capacity costs at least the minimum rate,
        # and routing a unit into an unserved patient costs at least that
        # patient's unserved penalty per duration unit
        rates = [
            self.overtime_rate[i] if i < self.n_full else self.variable_rate[i]
            for i in range(self.n_interp)
            if self.hired[i]
        ]
        unit_prices = [self.unserved_cost[p] / self.duration[p] for p in range(n_pat) if self.duration[p]]
        self.min_unit_price = min(rates + unit_prices) if (rates + unit_prices) else 0.0

    def load_cost(self, i: int, load: float) -> float:
        if i < self.n_full:
            over = load - self.regular_time[i]
            return self.overtime_rate[i] * over if over > 0.0 else 0.0
        extra = load - self.covered_threshold[i]
        return self.variable_rate[i] * extra if extra > 0.0 else 0.0

    def cheap_capacity(self, loads: list[float]) -> float:
        total = 0.0
        for i in range(self.n_interp):
            if not self.hired[i]:
                continue
            threshold = self.regular_time[i] if i < self.n_full else self.covered_threshold[i]
            slack = threshold - loads[i]
            if slack > 0.0:
                total += slack
        return total

    def future_bound(self, depth: int, loads: list[float]) -> float:
        """Lower bound on the cost of deciding the remaining patients: the
        service time still to place, beyond the unfilled cheap capacity,
        priced at the cheapest unit anywhere (waits bounded by zero)."""
        remaining = self.suffix_duration[depth] - self.cheap_capacity(loads)
        return remaining * self.min_unit_price if remaining > 0.0 else 0.0

    def wait_bound(self, depth: int, sessions: list[list[tuple[int, int]]]) -> float:
        """Lower bound on the remaining patients' wait penalties. Future
        sessions only add occupancy, so each patient's cheapest start that
        avoids the *current* sessions bounds its final wait from below.

        Not additive with future_bound: an unserved patient's duration is
        priced there while its penalty is counted here, so the two bounds
        must be applied separately (effectively a max), never summed."""
        total = 0.0
        for d in range(depth, len(self.order)):
            p = self.order[d]
            cheapest = self.unserved_cost[p]
            for i, start, end, wait_cost in self.options_cheap_first[p]:
                if wait_cost >= cheapest:
                    break
                blocked = False
                for s, e in sessions[i]:
                    if s <= end and start <= e:
                        blocked = True
                        break
                if not blocked:
                    cheapest = wait_cost
                    break
            total += cheapest
        return total

    def marginal(self, p: int, option: tuple[int, int] | None, loads: list[float]) -> float:
        """Cost added by deciding patient p: wait penalty plus the load-cost
        increase of the chosen interpreter."""
        if option is None:
            return self.unserved_cost[p]
        i, start = option
        delta = self.load_cost(i, loads[i] + self.duration[p]) - self.load_cost(i, loads[i])
        return self.penalty[p] * (start - self.arrival[p]) + delta

    def replay_value(self, interp_of: np.ndarray, start_of: np.ndarray) -> float:
        """Total of an existing assignment, accumulated exactly as the search
        would, so it can seed the incumbent."""
        loads = [0.0] * self.n_interp
        total = 0.0
        for p in self.order:
            i = int(interp_of[p])
            option = None if i < 0 else (i, int(start_of[p]))
            total += self.marginal(p, option, loads)
            if option is not None:
                loads[i] += self.duration[p]
        return total


def _min_value(space: _SearchSpace, incumbent: float) -> float:
    """Depth-first branch and bound for the optimal second-stage value.

    Prunes when the partial cost plus the load-relaxation bound reaches the
    incumbent; cheap options are explored first so good incumbents arrive
    early. The value is exact; only the tie-break is left to the
    reconstruction pass.
    """
    order = space.order
    sessions: list[list[tuple[int, int]]] = [[] for _ in range(space.n_interp)]
    loads = [0.0] * space.n_interp
    best = incumbent

    def descend(depth: int, partial: float) -> None:
        nonlocal best
        if partial + space.future_bound(depth, loads) >= best:
            return
        if partial + space.wait_bound(depth, sessions) >= best:
            return
        if depth == len(order):
            best = partial
            return
        p = order[depth]
        dur = space.duration[p]
        feasible = []
        for i, start, end, wait_cost in space.options_cheap_first[p]:
            taken = sessions[i]
            if any(s <= end and start <= e for s, e in taken):
                continue
            delta = space.load_cost(i, loads[i] + dur) - space.load_cost(i, loads[i])
            feasible.append((wait_cost + delta, i, start, end))
        feasible.sort()
        for cost, i, start, end in feasible:
            taken = sessions[i]
            taken.append((start, end))
            loads[i] += dur
            descend(depth + 1, partial + cost)
            loads[i] -= dur
            taken.pop()
        descend(depth + 1, partial + space.unserved_cost[p])

    descend(0, 0.0)
    return best


def _first_schedule_with_value(space: _SearchSpace, target: float) -> tuple[np.ndarray, np.ndarray]:
    """First completion (canonical option order, unserved last) whose total
    equals the known optimal value; realizes the deterministic tie-break of
    lower interpreter index, then earlier start."""
    order = space.order
    n_pat = len(space.arrival)
    sessions: list[list[tuple[int, int]]] = [[] for _ in range(space.n_interp)]
    loads = [0.0] * space.n_interp
    interp_of = np.full(n_pat, -1, dtype=np.int32)
    start_of = np.zeros(n_pat, dtype=np.int32)

    def descend(depth: int, partial: float) -> bool:
        if partial + space.future_bound(depth, loads) > target:
            return False
        if partial + space.wait_bound(depth, sessions) > target:
            return False
        if depth == len(order):
            return partial == target
        p = order[depth]
        dur = space.duration[p]
        for i, start, end, wait_cost in space.options_canonical[p]:
            taken = sessions[i]
            if any(s <= end and start <= e for s, e in taken):
                continue
            # grouping matters: replay_value and _min_value accumulate
            # partial + (wait + delta), and the target is matched exactly
            cost = wait_cost + (space.load_cost(i, loads[i] + dur) - space.load_cost(i, loads[i]))
            taken.append((start, end))
            loads[i] += dur
            interp_of[p], start_of[p] = i, start
            if descend(depth + 1, partial + cost):
                return True
            loads[i] -= dur
            taken.pop()
        interp_of[p], start_of[p] = -1, 0
        return descend(depth + 1, partial + space.unserved_cost[p])

    if not descend(0, 0.0):
        raise AssertionError("no completion matches the optimal value")
    return interp_of, start_of


def _guard_scenario(sv: ScenarioView, horizon: int, max_patients: int) -> None:
    if horizon > MAX_EXACT_HORIZON:
        raise SizeGuardExceeded(
            f"horizon {horizon} exceeds the exact-solver cap of {MAX_EXACT_HORIZON}; use the heuristic solvers"
        )
    if len(sv.patient_ids) > max_patients:
        raise SizeGuardExceeded(
            f"{len(sv.patient_ids)} patients exceed the exact-solver cap of {max_patients}; use the heuristic solvers"
        )


def second_stage_value(
    view: InstanceView,
    instance: ProblemInstance,
    hiring: HiringDecision,
    sv: ScenarioView,
    max_patients: int = DEFAULT_MAX_PATIENTS,
) -> float:
    """Optimal second-stage cost (no schedule) for a fixed hiring decision."""
    _guard_scenario(sv, view.horizon, max_patients)
    hired = view.hired_vector(hiring)
    space = _SearchSpace(view, hired, sv)
    interp_of, start_of, _, _, _ = greedy_assign_view(view, hired, sv)
    return _min_value(space, space.replay_value(interp_of, start_of))


def second_stage_exact_assignments(
    view: InstanceView,
    hiring: HiringDecision,
    sv: ScenarioView,
    max_patients: int = DEFAULT_MAX_PATIENTS,
) -> tuple[np.ndarray, np.ndarray, float]:
    """Array form of the exact second-stage solve: per-patient interpreter
    indices (-1 unserved), start periods, and the optimal value."""
    _guard_scenario(sv, view.horizon, max_patients)
    hired = view.hired_vector(hiring)
    space = _SearchSpace(view, hired, sv)
    interp_of, start_of, _, _, _ = greedy_assign_view(view, hired, sv)
    value = _min_value(space, space.replay_value(interp_of, start_of))
    interp_of, start_of = _first_schedule_with_value(space, value)
    return interp_of, start_of, value


def solve_second_stage_exact(
    instance: ProblemInstance,
    hiring: HiringDecision,
    scenario: Scenario,
    max_patients: int = DEFAULT_MAX_PATIENTS,
    view: InstanceView | None = None,
) -> tuple[Schedule, float]:
    """Minimum-cost feasible schedule for one scenario under a fixed hiring
    decision, within the size guard.

    The returned money is the full cost of the decision on this scenario: its
    fixed hiring cost plus the minimal second-stage cost, matching
    ScheduleCosting.total of the returned schedule.
    """
    if view is None:
        view = build_instance_view(instance)
    sv = build_scenario_view(view, instance, scenario)
    _guard_scenario(sv, view.horizon, max_patients)
    hired = view.hired_vector(hiring)
    space = _SearchSpace(view, hired, sv)
    interp_of, start_of, _, _, _ = greedy_assign_view(view, hired, sv)
    value = _min_value(space, space.replay_value(interp_of, start_of))
    interp_of, start_of = _first_schedule_with_value(space, value)
    return schedule_from_arrays(view, sv, interp_of, start_of), view.fixed_cost_of(hiring) + value


def _gray_codes(n_bits: int):
    for k in range(1 << n_bits):
        code = k ^ (k >> 1)
        yield tuple(bool((code >> b) & 1) for b in range(n_bits))


def solve_saa_exact(
    instance: ProblemInstance,
    scenarios: list[Scenario] | tuple[Scenario, ...],
    max_patients: int = DEFAULT_MAX_PATIENTS,
    max_part_timers: int = DEFAULT_MAX_PART_TIMERS,
) -> tuple[HiringDecision, float]:
    """Optimal hiring decision for a sampled batch: enumerate hiring vectors
    in Gray-code order, pruning any vector whose fixed cost alone already
    meets the incumbent; ties go to the lexicographically smallest bits."""
    view = build_instance_view(instance)
    template = view.template
    n_bits = len(template.bits)
    if n_bits > max_part_timers:
        raise SizeGuardExceeded(
            f"{n_bits} part-timers exceed the exact-solver cap of {max_part_timers}; use tabu search"
        )
    scenario_views = [build_scenario_view(view, instance, s) for s in scenarios]
    for sv in scenario_views:
        _guard_scenario(sv, view.horizon, max_patients)
    probabilities = []
    for scenario in scenarios:
        if scenario.probability is None:
            raise ValueError("scenario probability unset; use a sampled batch")
        probabilities.append(scenario.probability)

    best_total = float("inf")
    best_bits: tuple[bool, ...] | None = None
    for bits in _gray_codes(n_bits):
        hiring = template.with_bits(bits)
        fixed = view.fixed_cost_of(hiring)
        if fixed >= best_total:
            continue
        hired = view.hired_vector(hiring)
        total = fixed
        for probability, sv in zip(probabilities, scenario_views):
            space = _SearchSpace(view, hired, sv)
            interp_of, start_of, _, _, _ = greedy_assign_view(view, hired, sv)
            total += probability * _min_value(space, space.replay_value(interp_of, start_of))
            if total > best_total:
                break
        if total < best_total or (total == best_total and best_bits is not None and bits < best_bits):
            best_total = total
            best_bits = bits
    assert best_bits is not None
    return template.with_bits(best_bits), best_total
