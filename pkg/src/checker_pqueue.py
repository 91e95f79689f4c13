"""
Priority-queue checker.

deq and peek observe the maximum. A history is linearizable iff, for each
value v, every peek/deq of v can be placed at a point outside the critical
intervals of all larger values. Values are therefore visited from the
largest down, adding each value's critical interval to a coverage tree
after its own peek/deq ops have been checked.
"""
from __future__ import annotations

import logging
import time
from typing import Union

from src.checker_stack import critical_intervals, merge_closed, window_blocked
from src.framework import BOTTOM, Bottom, CheckReport, ResidualProvider, check_lin, direct_report
from src.model import AdtKind, History, Method
from src.standardize import StandardizedHistory
from src.structures import (
    CoverSegTree, build_partitions, interval_to_partition_range, op_span_to_partition_range,
)

logger = logging.getLogger(__name__)

_OBSERVERS = (Method.PEEK, Method.DEQ)


def _require_pqueue(h: History) -> None:
    if h.adt is not AdtKind.PRIORITY_QUEUE:
        raise ValueError(f"expected a priority-queue history, got {h.adt.value}")


def check_pqueue(sh: StandardizedHistory) -> CheckReport:
    h = sh.history
    _require_pqueue(h)
    start = time.perf_counter_ns()
    pi = build_partitions(h.ops)
    coverage = CoverSegTree(pi.n_partitions)
    plan = sorted(sh.value_index, reverse=True)
    for v in plan:
        entry = sh.value_index[v]
        for o in entry.all_ops:
            if o.method not in _OBSERVERS:
                continue
            lo, hi = op_span_to_partition_range(pi, o)
            if coverage.min_in_range(lo, hi) > 0:
                logger.debug("op %d of value %d is shadowed by larger values", o.id, v)
                return direct_report(False, [], time.perf_counter_ns() - start,
                                     reason=f"op {o.id} cannot observe value {v} as the maximum")
        ops = entry.all_ops
        lo, hi = interval_to_partition_range(pi, min(o.res for o in ops), max(o.inv for o in ops))
        coverage.add_range(lo, hi)
    return direct_report(True, plan[::-1], time.perf_counter_ns() - start)


# ---------------------------------------------------------------------------
# Unoptimized reference
# ---------------------------------------------------------------------------

def is_potential_min(h: History, v: int) -> bool:
    if v != min(h.values):
        return False
    crit = critical_intervals(h)
    blocks = merge_closed([c for u, c in crit.items() if u != v and c[0] < c[1]])
    return not any(
        window_blocked(o.inv, o.res, blocks)
        for o in h.by_value()[v] if o.method in _OBSERVERS
    )


def get_linp_pqueue_naive(h: History) -> Union[int, Bottom]:
    v = min(h.values)
    return v if is_potential_min(h, v) else BOTTOM


def check_pqueue_naive(sh: StandardizedHistory) -> CheckReport:
    _require_pqueue(sh.history)
    return check_lin(sh.history, ResidualProvider(sh.history, get_linp_pqueue_naive))
