"""Backend selection for the greedy dispatch kernel.

The compiled extension is preferred when it imported cleanly; setting
INTERPSCHED_PURE_PYTHON=1 forces the pure-Python fallback. Both backends are
kept literally in step and are checked for bit-equality in the test suite.
"""
from __future__ import annotations

import os

from . import _kernel_py

POLICY_MAX_ACCRUED = _kernel_py.POLICY_MAX_ACCRUED
POLICY_MIN_ACCRUED = _kernel_py.POLICY_MIN_ACCRUED

if os.environ.get("INTERPSCHED_PURE_PYTHON"):
    BACKEND = "python"
    greedy_assign = _kernel_py.greedy_assign
else:
    try:
        from . import _kernel  # type: ignore[attr-defined]

        BACKEND = "compiled"
        greedy_assign = _kernel.greedy_assign
    except ImportError:
        BACKEND = "python"
        greedy_assign = _kernel_py.greedy_assign
