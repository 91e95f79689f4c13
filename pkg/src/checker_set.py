"""
Set checker. Values are independent: a history is linearizable iff no
delete_fail of v falls inside the stretch where v is certainly
present: invoked no earlier than insert_ok(v) responds and responding no
later than delete_ok(v) is invoked. A shared instant orders the two ops.
"""
from __future__ import annotations

import logging
import time
from typing import Dict

from src.framework import CheckReport, direct_report
from src.model import AdtKind, Method
from src.standardize import StandardizedHistory

logger = logging.getLogger(__name__)


def _require_set(sh: StandardizedHistory) -> None:
    if sh.history.adt is not AdtKind.SET:
        raise ValueError(f"expected a set history, got {sh.history.adt.value}")


def is_safe_value(sh: StandardizedHistory, v: int) -> bool:
    """Every delete_fail of v starts before the insert responds or ends after the delete starts."""
    _require_set(sh)
    entry = sh.value_index[v]
    lo, hi = entry.add.res, entry.remove.inv
    return all(
        o.inv < lo or o.res > hi
        for o in entry.others if o.method is Method.DELETE_FAIL
    )


def check_set(sh: StandardizedHistory) -> CheckReport:
    """Single pass over the operations."""
    _require_set(sh)
    start = time.perf_counter_ns()
    min_res: Dict[int, int] = {}
    max_inv: Dict[int, int] = {}
    for o in sh.history.ops:
        if o.method is Method.INSERT_OK:
            min_res[o.value] = o.res
        elif o.method is Method.DELETE_OK:
            max_inv[o.value] = o.inv
    for o in sh.history.ops:
        if o.method is Method.DELETE_FAIL and min_res[o.value] <= o.inv and o.res <= max_inv[o.value]:
            elapsed = time.perf_counter_ns() - start
            logger.debug("delete_fail op %d observes value %d as absent while present", o.id, o.value)
            return direct_report(False, [], elapsed, reason=f"op {o.id} cannot be linearized")
    return direct_report(True, sorted(sh.value_index), time.perf_counter_ns() - start)


def check_set_naive(sh: StandardizedHistory) -> CheckReport:
    """Definition-level variant: every value must be safe."""
    start = time.perf_counter_ns()
    for v in sorted(sh.value_index):
        if not is_safe_value(sh, v):
            return direct_report(False, [], time.perf_counter_ns() - start, reason=f"value {v} is not safe")
    return direct_report(True, sorted(sh.value_index), time.perf_counter_ns() - start)
