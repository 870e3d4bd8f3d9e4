"""Daily staffing and scheduling of medical interpreters under uncertainty.

First-stage part-timer hiring and second-stage session scheduling, solved by
sample-average replication with statistical optimality-gap bounds and by tabu
search over hiring vectors, with Monte Carlo evaluation against the
expected-value baseline.
"""
from .domain import (
    Assignment,
    DurationModel,
    HiringDecision,
    InpatientPreAssignment,
    InterpreterKind,
    InterpreterProfile,
    PatientClass,
    PatientRecord,
    ProblemInstance,
    Scenario,
    Schedule,
    ScheduleCosting,
    derive_skill,
    group_part_timers,
    simplify_instance,
)
from .scenarios import RandomStream, expected_scenario, sample_batch, sample_scenario
from .costing import check_constraints, check_constraints_batch, second_stage_cost, total_objective
from .exact import SizeGuardExceeded, solve_saa_exact, solve_second_stage_exact
from .greedy import construct_schedule, fitness
from .tabu import TabuMemory, TsParams, run_ts
from .saa import SaaReport, run_saa
from .simulate import ScaledParameter, SimulationStats, sensitivity_sweep, simulate, solve_evp
from .kernel import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"
