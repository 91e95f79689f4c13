"""
Standardization of set/stack/queue/priority-queue histories.

Pipeline: complete_matches -> enforce_compliance -> strip_empty (not for
sets). Every step keeps the history's linearizability status, or reports a
NonLinearizable outcome when it proves a violation on the way.
"""
from __future__ import annotations

import logging
from bisect import bisect_right
from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, List, Optional, Tuple, Union

from src.model import (
    ADD_METHOD, EMPTY, REMOVE_METHOD, AdtKind, History, Method, Operation,
    canonical_set_methods,
)

logger = logging.getLogger(__name__)

SYNTHETIC_PROC_PREFIX = "~std-"

# Set operations that observe a value as absent do not touch it.
_NON_TOUCHING = frozenset({Method.DELETE_FAIL, Method.CONTAINS_FALSE})


@dataclass(frozen=True)
class NonLinearizable:
    """A standardization step proved the history non-linearizable."""

    stage: str
    reason: str


@dataclass(frozen=True)
class ValueOps:
    add: Operation
    remove: Operation
    others: Tuple[Operation, ...]

    @property
    def all_ops(self) -> Tuple[Operation, ...]:
        return (self.add, self.remove) + self.others


@dataclass(frozen=True)
class StandardizedHistory:
    history: History
    value_index: Dict[int, ValueOps]
    synthetic_ops: FrozenSet[int] = field(default_factory=frozenset)


def _check_adt(h: History) -> None:
    if h.adt is AdtKind.REGISTER:
        raise ValueError("register histories are not standardized")


def _add_remove(h: History, ops: List[Operation]) -> Tuple[Optional[Operation], Optional[Operation]]:
    add = remove = None
    for o in ops:
        if o.method is ADD_METHOD[h.adt]:
            add = o
        elif o.method is REMOVE_METHOD[h.adt]:
            remove = o
    return add, remove


def complete_matches(h: History) -> History:
    """
    Give every value a remove operation.

    Each missing remove is appended with window [T+1, T+2], T being the
    largest response time, on its own synthetic process. The shared window
    leaves every relative order of the synthetic removes available.
    """
    _check_adt(h)
    unmatched = []
    for v, ops in sorted(h.by_value().items()):
        if v == EMPTY:
            continue
        _, remove = _add_remove(h, ops)
        if remove is None:
            unmatched.append(v)
    if not unmatched:
        return h

    horizon = max(o.res for o in h.ops)
    next_id = max(o.id for o in h.ops) + 1
    remove_method = REMOVE_METHOD[h.adt]
    appended = [
        Operation(next_id + k, f"{SYNTHETIC_PROC_PREFIX}{k + 1}", remove_method, v, horizon + 1, horizon + 2)
        for k, v in enumerate(unmatched)
    ]
    logger.debug("appended %d synthetic %s ops", len(appended), remove_method.value)
    return h.with_ops(h.ops + tuple(appended))


def _touches(h: History, o: Operation) -> bool:
    return not (h.adt is AdtKind.SET and o.method in _NON_TOUCHING)


def enforce_compliance(h: History) -> Union[History, NonLinearizable]:
    """
    Shrink windows so that, for every value v and every op o touching v:
    inv(add) <= inv(o) <= inv(remove) and res(add) <= res(o) <= res(remove).

    Every adjustment follows from add < o < remove in any legal order, so
    only windows shrink. A window shrunk to nothing proves non-linearizability.
    """
    _check_adt(h)
    changed: Dict[int, Operation] = {}
    for v, ops in h.by_value().items():
        if v == EMPTY:
            continue
        add, remove = _add_remove(h, ops)
        if add is None or remove is None:
            raise ValueError(f"value {h.value_ids[v]} is not matched; run complete_matches first")

        add_res = min(add.res, remove.res)
        remove_inv = max(remove.inv, add.inv)
        for o in ops:
            if o is add or o is remove or not _touches(h, o):
                continue
            inv, res = max(o.inv, add.inv), min(o.res, remove.res)
            if (inv, res) != (o.inv, o.res):
                changed[o.id] = replace(o, inv=inv, res=res)
            add_res = min(add_res, res)
            remove_inv = max(remove_inv, inv)
        if add_res != add.res:
            changed[add.id] = replace(add, res=add_res)
        if remove_inv != remove.inv:
            changed[remove.id] = replace(remove, inv=remove_inv)

    for o in changed.values():
        if o.inv >= o.res:
            return NonLinearizable(
                "standardization",
                f"op {o.id} ({o.method.value} {h.value_ids[o.value]}) has no admissible window",
            )
    if not changed:
        return h
    logger.debug("compliance adjusted %d windows", len(changed))
    return h.with_ops(changed.get(o.id, o) for o in h.ops)


def bad_zone(h: History) -> List[Tuple[int, int]]:
    """Merged closed intervals [res(add), inv(remove)] where some value must be present."""
    spans = []
    for v, ops in h.by_value().items():
        if v == EMPTY:
            continue
        add, remove = _add_remove(h, ops)
        if add is not None and remove is not None and add.res <= remove.inv:
            spans.append((add.res, remove.inv))
    spans.sort()
    merged: List[Tuple[int, int]] = []
    for lo, hi in spans:
        if merged and lo <= merged[-1][1]:
            if hi > merged[-1][1]:
                merged[-1] = (merged[-1][0], hi)
        else:
            merged.append((lo, hi))
    return merged


def strip_empty(h: History) -> Union[History, NonLinearizable]:
    """Drop empty operations, or prove one of them can never see an empty object."""
    _check_adt(h)
    empties = [o for o in h.ops if o.method is Method.EMPTY]
    if not empties:
        return h
    zone = bad_zone(h)
    starts = [lo for lo, _ in zone]
    for o in empties:
        i = bisect_right(starts, o.inv) - 1
        if i >= 0 and zone[i][1] >= o.res:
            return NonLinearizable(
                "standardization",
                f"empty op {o.id} lies inside [{zone[i][0]}, {zone[i][1]}] where the object is never empty",
            )
    return h.with_ops(o for o in h.ops if o.method is not Method.EMPTY)


def build_value_index(h: History) -> Dict[int, ValueOps]:
    index = {}
    for v, ops in h.by_value().items():
        if v == EMPTY:
            continue
        add, remove = _add_remove(h, ops)
        others = tuple(o for o in ops if o is not add and o is not remove)
        index[v] = ValueOps(add, remove, others)
    return index


def standardize(h: History) -> Union[StandardizedHistory, NonLinearizable]:
    """
    Run the full standardization pipeline.

    Args:
        h: A well-formed, unambiguous set/stack/queue/priority-queue history

    Returns:
        The StandardizedHistory, or NonLinearizable with the failing stage
    """
    _check_adt(h)
    original_ids = {o.id for o in h.ops}
    current = complete_matches(canonical_set_methods(h))
    synthetic = frozenset(o.id for o in current.ops if o.id not in original_ids)

    compliant = enforce_compliance(current)
    if isinstance(compliant, NonLinearizable):
        logger.debug("compliance failed: %s", compliant.reason)
        return compliant
    current = compliant

    if h.adt is not AdtKind.SET:
        stripped = strip_empty(current)
        if isinstance(stripped, NonLinearizable):
            logger.debug("empty check failed: %s", stripped.reason)
            return stripped
        current = stripped

    return StandardizedHistory(current, build_value_index(current), synthetic)
