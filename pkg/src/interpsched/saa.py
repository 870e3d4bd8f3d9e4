"""Sample-average replication driver with statistical optimality-gap bounds.

Each replication solves a freshly sampled problem; the mean of the replication
optima is a statistical lower bound on the true optimum, and the large-sample
evaluation of a fixed candidate is an upper bound. Their difference, with a
normal confidence interval from the combined variances, is the reported
optimality gap.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from statistics import NormalDist
from typing import Optional, Sequence

from .arrays import build_instance_view, build_scenario_view
from .domain import HiringDecision, ProblemInstance
from .exact import (
    DEFAULT_MAX_PART_TIMERS,
    DEFAULT_MAX_PATIENTS,
    SizeGuardExceeded,
    second_stage_value,
    solve_saa_exact,
)
from .greedy import greedy_assign_view
from .scenarios import RandomStream, sample_batch
from .tabu import TsParams, run_ts

INNER_SOLVERS = ("exact", "ts")


def z_value(confidence: float) -> float:
    """Standard-normal quantile for a symmetric two-sided interval at the
    given confidence level."""
    if not 0.0 < confidence < 1.0:
        raise ValueError("confidence must be in (0, 1)")
    tail = (1.0 - confidence) / 2.0
    return NormalDist().inv_cdf(1.0 - tail)


def confidence_interval(gap: float, sigma_gap: float, confidence: float) -> tuple[float, float]:
    """gap +/- z * sigma_gap."""
    z = z_value(confidence)
    return (gap - z * sigma_gap, gap + z * sigma_gap)


def gap_percent(gap: float, lower_bound: float) -> float:
    """Gap as a percentage of the lower-bound estimate (0 when the bound is 0)."""
    return 100.0 * gap / lower_bound if lower_bound else 0.0


def _mean_and_sigma_of_mean(values: Sequence[float]) -> tuple[float, float]:
    """Sample mean and the standard deviation *of the mean* (divisor (n-1)n)."""
    n = len(values)
    mean = sum(values) / n
    if n < 2:
        return mean, 0.0
    var = sum((v - mean) ** 2 for v in values) / ((n - 1) * n)
    return mean, math.sqrt(var)


@dataclass(frozen=True)
class SaaReport:
    """Everything the replication procedure measured."""

    per_replication: tuple[tuple[HiringDecision, float], ...]
    g_hat: tuple[float, ...]
    sigma_g: tuple[float, ...]
    lb_mean: float
    sigma_lb: float
    m_star: int
    gap: float
    gap_pct: float
    sigma_gap: float
    ci_low: float
    ci_high: float
    num_scenarios: int
    eval_scenarios: int
    num_replications: int
    confidence: float
    gap_accepted: bool
    evaluator: str

    @property
    def best_decision(self) -> HiringDecision:
        return self.per_replication[self.m_star][0]

    @property
    def upper_bound(self) -> float:
        return self.g_hat[self.m_star]

    @property
    def sigma_ub(self) -> float:
        return self.sigma_g[self.m_star]

    def summary_csv(self) -> str:
        header = "S,LB,LB_std,UB,UB_std,gap,gap_pct,gap_std,ci_low,ci_high"
        row = ",".join(
            repr(v)
            for v in (
                self.num_scenarios,
                self.lb_mean,
                self.sigma_lb,
                self.upper_bound,
                self.sigma_ub,
                self.gap,
                self.gap_pct,
                self.sigma_gap,
                self.ci_low,
                self.ci_high,
            )
        )
        return header + "\n" + row + "\n"


def run_saa(
    instance: ProblemInstance,
    num_scenarios: int,
    num_replications: int,
    eval_scenarios: int,
    confidence: float = 0.95,
    master_seed: int = 0,
    inner_solver: str = "exact",
    ts_params: Optional[TsParams] = None,
    max_patients: int = DEFAULT_MAX_PATIENTS,
    max_part_timers: int = DEFAULT_MAX_PART_TIMERS,
) -> SaaReport:
    """Replicate sample-solve-evaluate and report bounds, gap and interval.

    Per replication: solve a fresh batch of ``num_scenarios`` scenarios with
    the chosen inner solver, then estimate the candidate's true objective on
    ``eval_scenarios`` fresh scenarios (each scenario costed exactly within
    the desk-scale guard, by the greedy heuristic beyond it). The best
    candidate is the one with the smallest estimated true objective.
    """
    if num_scenarios < 1:
        raise ValueError("num_scenarios must be >= 1")
    if num_replications < 2:
        raise ValueError("num_replications must be >= 2")
    if eval_scenarios <= num_scenarios:
        raise ValueError("eval_scenarios must exceed num_scenarios")
    if inner_solver not in INNER_SOLVERS:
        raise ValueError(f"inner_solver must be one of {INNER_SOLVERS}")

    view = build_instance_view(instance)
    per_replication: list[tuple[HiringDecision, float]] = []
    g_hat: list[float] = []
    sigma_g: list[float] = []
    used_exact = used_greedy = False
    for m in range(num_replications):
        batch = sample_batch(instance, num_scenarios, master_seed, purpose=f"saa-rep-{m}")
        if inner_solver == "exact":
            decision, optimum = solve_saa_exact(
                instance, batch, max_patients=max_patients, max_part_timers=max_part_timers
            )
        else:
            params = replace(
                ts_params if ts_params is not None else TsParams(),
                fitness_sample_size=num_scenarios,
                master_seed=RandomStream(master_seed, ("saa-ts", m)).derived_seed(),
            )
            result = run_ts(instance, params, fitness_scenarios=batch)
            decision, optimum = result.decision, result.best_fitness
        per_replication.append((decision, optimum))

        eval_batch = sample_batch(instance, eval_scenarios, master_seed, purpose=f"saa-eval-{m}")
        fixed = view.fixed_cost_of(decision)
        hired = view.hired_vector(decision)
        values: list[float] = []
        for scenario in eval_batch:
            sv = build_scenario_view(view, instance, scenario)
            try:
                second = second_stage_value(view, instance, decision, sv, max_patients=max_patients)
                used_exact = True
            except SizeGuardExceeded:
                _, _, variable, overtime, penalty = greedy_assign_view(view, hired, sv)
                second = variable + overtime + penalty
                used_greedy = True
            values.append(fixed + second)
        mean, sigma = _mean_and_sigma_of_mean(values)
        g_hat.append(mean)
        sigma_g.append(sigma)

    lb_mean, sigma_lb = _mean_and_sigma_of_mean([optimum for _, optimum in per_replication])
    m_star = min(range(num_replications), key=lambda m: (g_hat[m], m))
    gap = g_hat[m_star] - lb_mean
    sigma_gap = math.sqrt(sigma_lb**2 + sigma_g[m_star] ** 2)
    ci_low, ci_high = confidence_interval(gap, sigma_gap, confidence)
    evaluator = {
        (True, False): "exact",
        (False, True): "greedy",
        (True, True): "mixed",
        (False, False): "exact",
    }[(used_exact, used_greedy)]
    return SaaReport(
        per_replication=tuple(per_replication),
        g_hat=tuple(g_hat),
        sigma_g=tuple(sigma_g),
        lb_mean=lb_mean,
        sigma_lb=sigma_lb,
        m_star=m_star,
        gap=gap,
        gap_pct=gap_percent(gap, lb_mean),
        sigma_gap=sigma_gap,
        ci_low=ci_low,
        ci_high=ci_high,
        num_scenarios=num_scenarios,
        eval_scenarios=eval_scenarios,
        num_replications=num_replications,
        confidence=confidence,
        gap_accepted=gap >= -2.0 * sigma_gap,
        evaluator=evaluator,
    )
