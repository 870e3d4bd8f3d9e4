# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled greedy dispatch kernel.

Mirrors _kernel_py.greedy_assign exactly, including the order of every cost
accumulation, so compiled and pure backends produce bit-equal results.
"""
import numpy as np

cimport numpy as cnp

cnp.import_array()

POLICY_MAX_ACCRUED = 0
POLICY_MIN_ACCRUED = 1


def greedy_assign(
    int horizon,
    double alpha_horizon,
    int n_full_time,
    cnp.uint64_t[:] interp_lang_mask,
    cnp.uint8_t[:, :] avail,
    cnp.int32_t[:, :] span_end,
    cnp.float64_t[:] regular_time,
    cnp.float64_t[:] overtime_rate,
    cnp.float64_t[:] covered_threshold,
    cnp.float64_t[:] variable_rate,
    cnp.uint8_t[:] hired,
    cnp.int32_t[:] pat_arrival,
    cnp.int32_t[:] pat_duration,
    cnp.float64_t[:] pat_penalty,
    cnp.uint64_t[:] pat_lang_mask,
    cnp.int32_t[:] pat_tie_rank,
    int policy,
    cnp.int32_t[:] out_interpreter,
    cnp.int32_t[:] out_start,
):
    cdef int n_interp = interp_lang_mask.shape[0]
    cdef int n_pat = pat_arrival.shape[0]
    cdef int t, i, p, best, fit_end, end
    cdef bint take
    cdef double accrued, best_accrued, wait, over, extra
    cdef cnp.uint64_t mask

    busy_np = np.zeros(n_interp, dtype=np.int32)
    interp_np = np.full(n_pat, -1, dtype=np.int32)
    start_np = np.zeros(n_pat, dtype=np.int32)
    load_np = np.zeros(n_interp, dtype=np.float64)
    cdef cnp.int32_t[:] busy_until = busy_np
    cdef cnp.int32_t[:] interp_of = interp_np
    cdef cnp.int32_t[:] start_of = start_np
    cdef cnp.float64_t[:] load = load_np

    for t in range(1, horizon + 1):
        for i in range(n_interp):
            if hired[i] == 0 or busy_until[i] >= t or avail[i, t - 1] == 0:
                continue
            fit_end = span_end[i, t - 1]
            mask = interp_lang_mask[i]
            best = -1
            best_accrued = 0.0
            for p in range(n_pat):
                if interp_of[p] >= 0 or pat_arrival[p] > t or (pat_lang_mask[p] & mask) == 0:
                    continue
                end = t + pat_duration[p] - 1
                if end > horizon:
                    end = horizon
                if end > fit_end:
                    continue
                accrued = pat_penalty[p] * (t - pat_arrival[p])
                if best < 0:
                    take = True
                elif accrued != best_accrued:
                    take = (accrued > best_accrued) if policy == 0 else (accrued < best_accrued)
                elif pat_penalty[p] != pat_penalty[best]:
                    take = pat_penalty[p] > pat_penalty[best]
                elif pat_arrival[p] != pat_arrival[best]:
                    take = pat_arrival[p] < pat_arrival[best]
                else:
                    take = pat_tie_rank[p] < pat_tie_rank[best]
                if take:
                    best = p
                    best_accrued = accrued
            if best >= 0:
                interp_of[best] = i
                start_of[best] = t
                end = t + pat_duration[best] - 1
                busy_until[i] = end if end <= horizon else horizon

    for p in range(n_pat):
        if interp_of[p] >= 0:
            load[interp_of[p]] += pat_duration[p]

    cdef double penalty_cost = 0.0
    for p in range(n_pat):
        if interp_of[p] >= 0:
            wait = start_of[p] - pat_arrival[p]
        else:
            wait = alpha_horizon - pat_arrival[p]
        penalty_cost += pat_penalty[p] * wait

    cdef double overtime_cost = 0.0
    for i in range(n_full_time):
        over = load[i] - regular_time[i]
        if over > 0.0:
            overtime_cost += overtime_rate[i] * over

    cdef double variable_cost = 0.0
    for i in range(n_full_time, n_interp):
        if hired[i] != 0:
            extra = load[i] - covered_threshold[i]
            if extra > 0.0:
                variable_cost += variable_rate[i] * extra

    for p in range(n_pat):
        out_interpreter[p] = interp_of[p]
        out_start[p] = start_of[p] if interp_of[p] >= 0 else 0
    return variable_cost, overtime_cost, penalty_cost
