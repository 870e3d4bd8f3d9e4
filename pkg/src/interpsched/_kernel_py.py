"""Pure-Python reference implementation of the greedy dispatch kernel.

Semantics are identical to the compiled extension; arithmetic is performed in
the same order so both backends produce bit-equal costs. Kept deliberately
loop-for-loop parallel to _kernel.pyx.
"""
from __future__ import annotations

POLICY_MAX_ACCRUED = 0
POLICY_MIN_ACCRUED = 1


def greedy_assign(
    horizon,
    alpha_horizon,
    n_full_time,
    interp_lang_mask,
    avail,
    span_end,
    regular_time,
    overtime_rate,
    covered_threshold,
    variable_rate,
    hired,
    pat_arrival,
    pat_duration,
    pat_penalty,
    pat_lang_mask,
    pat_tie_rank,
    policy,
    out_interpreter,
    out_start,
):
    """Sweep the horizon assigning waiting patients to idle interpreters.

    At each period, each usable idle interpreter (full-timers first, then
    hired part-timers, in canonical order) picks the compatible waiting
    patient with the policy-best accrued penalty whose occupied span (the
    session truncated at the horizon; the full duration is still worked and
    paid) fits the interpreter's availability run. Returns the second-stage
    cost components (variable, overtime, penalty); assignments are written
    into out_interpreter (-1 = unserved) and out_start.
    """
    n_interp = len(interp_lang_mask)
    n_pat = len(pat_arrival)
    ilang = [int(x) for x in interp_lang_mask]
    plang = [int(x) for x in pat_lang_mask]
    arrival = [int(x) for x in pat_arrival]
    duration = [int(x) for x in pat_duration]
    penalty = [float(x) for x in pat_penalty]
    tie_rank = [int(x) for x in pat_tie_rank]
    usable = [bool(x) for x in hired]
    avail_rows = [[bool(v) for v in avail[i]] for i in range(n_interp)]
    span_rows = [[int(v) for v in span_end[i]] for i in range(n_interp)]

    busy_until = [0] * n_interp
    interp_of = [-1] * n_pat
    start_of = [0] * n_pat

    for t in range(1, horizon + 1):
        for i in range(n_interp):
            if not usable[i] or busy_until[i] >= t or not avail_rows[i][t - 1]:
                continue
            fit_end = span_rows[i][t - 1]
            mask = ilang[i]
            best = -1
            best_accrued = 0.0
            for p in range(n_pat):
                if interp_of[p] >= 0 or arrival[p] > t or not (plang[p] & mask):
                    continue
                end = t + duration[p] - 1
                if end > horizon:
                    end = horizon
                if end > fit_end:
                    continue
                accrued = penalty[p] * (t - arrival[p])
                if best < 0:
                    take = True
                elif accrued != best_accrued:
                    take = (accrued > best_accrued) if policy == POLICY_MAX_ACCRUED else (accrued < best_accrued)
                elif penalty[p] != penalty[best]:
                    take = penalty[p] > penalty[best]
                elif arrival[p] != arrival[best]:
                    take = arrival[p] < arrival[best]
                else:
                    take = tie_rank[p] < tie_rank[best]
                if take:
                    best = p
                    best_accrued = accrued
            if best >= 0:
                interp_of[best] = i
                start_of[best] = t
                busy_until[i] = min(horizon, t + duration[best] - 1)

    load = [0.0] * n_interp
    for p in range(n_pat):
        if interp_of[p] >= 0:
            load[interp_of[p]] += duration[p]

    penalty_cost = 0.0
    for p in range(n_pat):
        if interp_of[p] >= 0:
            wait = float(start_of[p] - arrival[p])
        else:
            wait = alpha_horizon - arrival[p]
        penalty_cost += penalty[p] * wait

    overtime_cost = 0.0
    for i in range(n_full_time):
        over = load[i] - regular_time[i]
        if over > 0.0:
            overtime_cost += overtime_rate[i] * over

    variable_cost = 0.0
    for i in range(n_full_time, n_interp):
        if usable[i]:
            extra = load[i] - covered_threshold[i]
            if extra > 0.0:
                variable_cost += variable_rate[i] * extra

    for p in range(n_pat):
        out_interpreter[p] = interp_of[p]
        out_start[p] = start_of[p] if interp_of[p] >= 0 else 0
    return variable_cost, overtime_cost, penalty_cost
