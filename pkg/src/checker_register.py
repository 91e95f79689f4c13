"""
Register checker: decrease-and-conquer over unambiguous register histories.

A value is removable when (1) its write is invoked before every read of it
responds, (2) if forward, its interval meets no other forward interval and
contains no backward one, and (3) if backward, its interval lies inside no
forward interval. Summaries are recomputed on every call.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Optional, Tuple, Union

from src.framework import BOTTOM, Bottom, CheckReport, ResidualProvider, check_lin
from src.model import AdtKind, History, Method, Operation

logger = logging.getLogger(__name__)


class ValueClass(str, Enum):
    FORWARD = "forward"
    BACKWARD = "backward"


@dataclass(frozen=True)
class RegisterValueSummary:
    value: int
    write: Optional[Operation]
    reads: Tuple[Operation, ...]
    min_res: int
    max_inv: int

    @property
    def cls(self) -> ValueClass:
        # a tie pins the value at the shared instant, so it acts forward
        return ValueClass.FORWARD if self.min_res <= self.max_inv else ValueClass.BACKWARD

    @property
    def interval(self) -> Tuple[int, int]:
        if self.cls is ValueClass.FORWARD:
            return self.min_res, self.max_inv
        return self.max_inv, self.min_res


def summarize(ops: Iterable[Operation]) -> Dict[int, RegisterValueSummary]:
    """Per-value extremes over the given register operations."""
    grouped: Dict[int, List[Operation]] = {}
    for o in ops:
        grouped.setdefault(o.value, []).append(o)
    summaries = {}
    for v, vops in grouped.items():
        write = next((o for o in vops if o.method is Method.WRITE), None)
        reads = tuple(o for o in vops if o.method is Method.READ)
        summaries[v] = RegisterValueSummary(
            v, write, reads,
            min(o.res for o in vops), max(o.inv for o in vops),
        )
    return summaries


def _disjoint(a: Tuple[int, int], b: Tuple[int, int]) -> bool:
    return a[1] < b[0] or b[1] < a[0]


def _within(inner: Tuple[int, int], outer: Tuple[int, int]) -> bool:
    return outer[0] <= inner[0] and inner[1] <= outer[1]


def is_preserving(summaries: Dict[int, RegisterValueSummary], v: int) -> bool:
    s = summaries[v]
    if s.write is None:
        return False
    if any(not s.write.inv < r.res for r in s.reads):
        return False
    others = [o for u, o in summaries.items() if u != v]
    if s.cls is ValueClass.FORWARD:
        for o in others:
            if o.cls is ValueClass.FORWARD and not _disjoint(s.interval, o.interval):
                return False
            if o.cls is ValueClass.BACKWARD and _within(o.interval, s.interval):
                return False
        return True
    return not any(o.cls is ValueClass.FORWARD and _within(s.interval, o.interval) for o in others)


def get_linp_register(h: History) -> Union[int, Bottom]:
    """Smallest value of the residual `h` meeting the three conditions, or BOTTOM."""
    summaries = summarize(h.ops)
    for v in sorted(summaries):
        if is_preserving(summaries, v):
            return v
    return BOTTOM


def check_register(h: History) -> CheckReport:
    if h.adt is not AdtKind.REGISTER:
        raise ValueError(f"expected a register history, got {h.adt.value}")
    report = check_lin(h, ResidualProvider(h, get_linp_register))
    logger.debug("register check: %s after %d removals", report.verdict.value, len(report.removal_order))
    return report
