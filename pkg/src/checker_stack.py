"""
Stack checker.

A value is potentially bottom when every one of its operations can be
placed at a point outside the critical interval [min res, max inv] of every
other value. Such a value can sit at the bottom of the stack and be removed
without changing the verdict.

The optimized provider finds these values incrementally: a partition is
safe for an operation once no other value's critical interval covers it.
`partition_set` counts coverage per partition (with the sum of covering
values as tag), `opr_set` finds the live operations containing a partition.
"""
from __future__ import annotations

import logging
from collections import deque
from typing import Deque, Dict, List, Optional, Set, Tuple, Union

from src.framework import BOTTOM, Bottom, CheckReport, ResidualProvider, check_lin
from src.model import EMPTY, AdtKind, History
from src.standardize import StandardizedHistory
from src.structures import (
    MinTagSegTree, OpIntervalTree, PartitionRange, build_partitions,
    interval_to_partition_range,
)

logger = logging.getLogger(__name__)


def _require_stack(h: History) -> None:
    if h.adt is not AdtKind.STACK:
        raise ValueError(f"expected a stack history, got {h.adt.value}")


class StackProvider:
    """Incremental potentially-bottom value provider."""

    def __init__(self, sh: StandardizedHistory):
        h = sh.history
        _require_stack(h)
        self.pi = build_partitions(h.ops)
        self.partition_set = MinTagSegTree(self.pi.n_partitions)
        self.critical: Dict[int, PartitionRange] = {}
        for v, entry in sh.value_index.items():
            ops = entry.all_ops
            rng = interval_to_partition_range(self.pi, min(o.res for o in ops), max(o.inv for o in ops))
            if rng[0] < rng[1]:
                self.partition_set.update_range(rng[0], rng[1], 1, v)
                self.critical[v] = rng
        # the two unbounded partitions lie inside no window
        for p in {0, self.pi.n_partitions - 1}:
            self.partition_set.disable_point(p)

        self.opr_set = OpIntervalTree(self.pi)
        for o in h.ops:
            self.opr_set.insert(o)

        self.pot_bot_vals: Deque[int] = deque()
        self.waiting_returns: Dict[int, List[int]] = {}
        self.pending_returns: Deque[int] = deque()
        self._subtracted: Set[int] = set()
        self._alive: Set[int] = set(sh.value_index)

    def get_permissive(self) -> Optional[Tuple[int, Optional[int]]]:
        """
        Next permissive partition.

        Returns:
            (partition, None) when no critical interval blocks it,
            (partition, v) when only v's interval does, or None
        """
        if self.pending_returns:
            return self.pending_returns.popleft(), None
        pos, weight, tag = self.partition_set.query_min()
        if weight >= 2:
            return None
        self.partition_set.disable_point(pos)
        if weight == 0:
            return pos, None
        self.waiting_returns.setdefault(tag, []).append(pos)
        return pos, tag

    def remove_subhistory(self, v: int) -> None:
        if v in self._subtracted or v not in self._alive:
            raise ValueError(f"value {v} is not alive")
        self._subtracted.add(v)
        rng = self.critical.get(v)
        if rng is not None:
            self.partition_set.update_range(rng[0], rng[1], -1, -v)
        self.pending_returns.extend(self.waiting_returns.pop(v, ()))

    def get_linp_stack(self) -> Union[int, Bottom]:
        while not self.pot_bot_vals:
            found = self.get_permissive()
            if found is None:
                break
            part, value = found
            for o in self.opr_set.search(part, value):
                self.opr_set.remove(o)
                if not self.opr_set.contains(o.value):
                    self.remove_subhistory(o.value)
                    self.pot_bot_vals.append(o.value)
        if not self.pot_bot_vals:
            return BOTTOM
        return self.pot_bot_vals.popleft()

    def next_value(self) -> Union[int, Bottom]:
        return self.get_linp_stack()

    def notify_removed(self, value: int) -> None:
        self._alive.discard(value)


def init_stack_checker(sh: StandardizedHistory) -> StackProvider:
    """Build the provider state for a standardized stack history."""
    _require_stack(sh.history)
    return StackProvider(sh)


def check_stack(sh: StandardizedHistory) -> CheckReport:
    report = check_lin(sh.history, init_stack_checker(sh))
    logger.debug("stack check: %s", report.verdict.value)
    return report


# ---------------------------------------------------------------------------
# Unoptimized reference
# ---------------------------------------------------------------------------

def critical_intervals(h: History) -> Dict[int, Tuple[int, int]]:
    """(min res, max inv) over all operations of each value."""
    out = {}
    for v, ops in h.by_value().items():
        if v != EMPTY:
            out[v] = (min(o.res for o in ops), max(o.inv for o in ops))
    return out


def merge_closed(intervals: List[Tuple[int, int]]) -> List[Tuple[int, int]]:
    merged: List[Tuple[int, int]] = []
    for lo, hi in sorted(intervals):
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(hi, merged[-1][1]))
        else:
            merged.append((lo, hi))
    return merged


def window_blocked(inv: int, res: int, blocks: List[Tuple[int, int]]) -> bool:
    """Whether the open window (inv, res) lies inside the union of merged closed blocks."""
    return any(lo <= inv and res <= hi for lo, hi in blocks)


def is_potentially_bottom(h: History, v: int) -> bool:
    crit = critical_intervals(h)
    # a single point cannot cover an open window
    blocks = merge_closed([c for u, c in crit.items() if u != v and c[0] < c[1]])
    return not any(window_blocked(o.inv, o.res, blocks) for o in h.by_value().get(v, ()))


def get_linp_stack_naive(h: History) -> Union[int, Bottom]:
    for v in sorted(h.values):
        if is_potentially_bottom(h, v):
            return v
    return BOTTOM


def check_stack_naive(sh: StandardizedHistory) -> CheckReport:
    _require_stack(sh.history)
    return check_lin(sh.history, ResidualProvider(sh.history, get_linp_stack_naive))
