"""
Queue checker.

A value v is potentially front when, against every other value v':
  - its enq is invoked before enq(v') responds (frontEnq), and
  - each of its peek/deq ops is invoked before every peek/deq of v'
    responds (frontPeekDeq).
Both conditions survive the removal of other values, so the provider keeps
two monotone membership sets fed by lazy sweeps and returns the first value
that has entered both.
"""
from __future__ import annotations

import logging
from typing import Dict, List, Optional, Set, Tuple, Union

from sortedcontainers import SortedList

from src.framework import BOTTOM, Bottom, CheckReport, ResidualProvider, check_lin
from src.model import AdtKind, History, Method
from src.standardize import StandardizedHistory

logger = logging.getLogger(__name__)

_OBSERVERS = (Method.PEEK, Method.DEQ)

# responses sort before invocations at the same instant
_RES, _INV = 0, 1


def _require_queue(h: History) -> None:
    if h.adt is not AdtKind.QUEUE:
        raise ValueError(f"expected a queue history, got {h.adt.value}")


class QueueProvider:
    """Incremental potentially-front value provider."""

    def __init__(self, sh: StandardizedHistory):
        _require_queue(sh.history)
        self.alive: Set[int] = set(sh.value_index)
        self.s_front_enq: Set[int] = set()
        self.s_front_peek_deq: Set[int] = set()

        events: List[Tuple[int, int, int]] = []
        for v, entry in sh.value_index.items():
            events.append((entry.add.inv, _INV, v))
            events.append((entry.add.res, _RES, v))
        events.sort()
        self._enq_events = events
        self._cursor = 0

        self.min_res: Dict[int, int] = {}
        self.max_inv: Dict[int, int] = {}
        for v, entry in sh.value_index.items():
            observers = [o for o in entry.all_ops if o.method in _OBSERVERS]
            self.min_res[v] = min(o.res for o in observers)
            self.max_inv[v] = max(o.inv for o in observers)
        self._min_res_events = SortedList((t, v) for v, t in self.min_res.items())
        self._max_inv_events = SortedList((t, v) for v, t in self.max_inv.items())

    def next_front_enq(self) -> Optional[int]:
        """Next value whose enq is invoked before every other live enq responds."""
        events = self._enq_events
        while self._cursor < len(events):
            _, kind, v = events[self._cursor]
            if kind == _RES:
                if v in self.alive:
                    return None
                self._cursor += 1
                continue
            self._cursor += 1
            if v in self.alive:
                return v
        return None

    def _min_res_excluding(self, v: int) -> float:
        for t, u in self._min_res_events[:2]:
            if u != v:
                return t
        return float("inf")

    def next_front_peek_deq(self) -> Optional[int]:
        """Next value whose peek/deq ops all start before every other value's peek/deq ends."""
        if self._max_inv_events:
            t, v = self._max_inv_events[0]
            if t < self._min_res_excluding(v):
                self._max_inv_events.pop(0)
                return v
        if self._min_res_events:
            _, u = self._min_res_events[0]
            if u not in self.s_front_peek_deq and self.max_inv[u] < self._min_res_excluding(u):
                self._max_inv_events.remove((self.max_inv[u], u))
                return u
        return None

    def get_linp_queue(self) -> Union[int, Bottom]:
        while True:
            v1 = self.next_front_enq()
            if v1 is not None:
                self.s_front_enq.add(v1)
                if v1 in self.s_front_peek_deq:
                    return v1
            v2 = self.next_front_peek_deq()
            if v2 is not None:
                self.s_front_peek_deq.add(v2)
                if v2 in self.s_front_enq:
                    return v2
            if v1 is None and v2 is None:
                return BOTTOM

    def next_value(self) -> Union[int, Bottom]:
        return self.get_linp_queue()

    def notify_removed(self, value: int) -> None:
        if value not in self.alive:
            raise ValueError(f"value {value} is not alive")
        self.alive.discard(value)
        self._min_res_events.discard((self.min_res[value], value))
        self._max_inv_events.discard((self.max_inv[value], value))


def check_queue(sh: StandardizedHistory) -> CheckReport:
    report = check_lin(sh.history, QueueProvider(sh))
    logger.debug("queue check: %s", report.verdict.value)
    return report


# ---------------------------------------------------------------------------
# Unoptimized reference
# ---------------------------------------------------------------------------

def front_enq(h: History, v: int) -> bool:
    groups = h.by_value()
    enq = next(o for o in groups[v] if o.method is Method.ENQ)
    return all(
        enq.inv < o.res
        for u, ops in groups.items() if u != v
        for o in ops if o.method is Method.ENQ
    )


def front_peek_deq(h: History, v: int) -> bool:
    groups = h.by_value()
    mine = [o for o in groups[v] if o.method in _OBSERVERS]
    theirs = [o for u, ops in groups.items() if u != v for o in ops if o.method in _OBSERVERS]
    return all(o.inv < other.res for o in mine for other in theirs)


def is_potentially_front(h: History, v: int) -> bool:
    return front_enq(h, v) and front_peek_deq(h, v)


def get_linp_queue_naive(h: History) -> Union[int, Bottom]:
    for v in sorted(h.values):
        if is_potentially_front(h, v):
            return v
    return BOTTOM


def check_queue_naive(sh: StandardizedHistory) -> CheckReport:
    _require_queue(sh.history)
    return check_lin(sh.history, ResidualProvider(sh.history, get_linp_queue_naive))
