"""
Brute-force linearizability oracle for small histories.

Memoized depth-first search over (set of linearized ops, ADT state). An
operation may be linearized next iff its invocation precedes the earliest
response among the operations not yet linearized; this enumerates exactly
the orders realizable by injective points inside the open windows.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Set, Tuple, Union

from src import config
from src.model import History, Operation
from src.seqspec import REJECT, AbstractOp, initial_state, step

logger = logging.getLogger(__name__)


class _BudgetExceeded:
    def __repr__(self) -> str:
        return "BUDGET_EXCEEDED"


BUDGET_EXCEEDED = _BudgetExceeded()


@dataclass(frozen=True)
class OracleBudget:
    max_ops: int = config.ORACLE_MAX_OPS
    max_states: int = config.ORACLE_MAX_STATES

    def __post_init__(self):
        if self.max_ops <= 0 or self.max_states <= 0:
            raise ValueError("oracle budgets must be positive")


class _OutOfStates(Exception):
    pass


def _search(h: History, budget: OracleBudget) -> Optional[List[int]]:
    ops: List[Operation] = sorted(h.ops, key=lambda o: (o.inv, o.res, o.id))
    n = len(ops)
    full = (1 << n) - 1
    dead: Set[Tuple[int, object]] = set()
    order: List[int] = []

    def dfs(mask: int, state) -> bool:
        if mask == full:
            return True
        key = (mask, state)
        if key in dead:
            return False
        if len(dead) >= budget.max_states:
            raise _OutOfStates()
        horizon = min(ops[i].res for i in range(n) if not mask >> i & 1)
        for i in range(n):
            if mask >> i & 1:
                continue
            o = ops[i]
            if o.inv >= horizon:
                # ops are sorted by invocation
                break
            nxt = step(h.adt, state, AbstractOp(o.method, o.value))
            if nxt is REJECT:
                continue
            order.append(o.id)
            if dfs(mask | 1 << i, nxt):
                return True
            order.pop()
        dead.add(key)
        return False

    if dfs(0, initial_state(h.adt)):
        return order
    return None


def find_linearization(h: History, budget: Optional[OracleBudget] = None
                       ) -> Union[List[int], None, _BudgetExceeded]:
    """
    Search for a legal linearization.

    Returns:
        Operation ids in linearization order, None when no legal order
        exists, or BUDGET_EXCEEDED
    """
    budget = budget or OracleBudget()
    if len(h) > budget.max_ops:
        logger.warning("oracle refused %d ops (max %d)", len(h), budget.max_ops)
        return BUDGET_EXCEEDED
    try:
        return _search(h, budget)
    except _OutOfStates:
        logger.warning("oracle exceeded %d states", budget.max_states)
        return BUDGET_EXCEEDED


def is_linearizable_bruteforce(h: History, budget: Optional[OracleBudget] = None
                               ) -> Union[bool, _BudgetExceeded]:
    found = find_linearization(h, budget)
    if found is BUDGET_EXCEEDED:
        return BUDGET_EXCEEDED
    return found is not None


def replay_witness(h: History, order: List[int]) -> bool:
    """Check a witness independently: real-time order respected and legal sequence."""
    by_id: Dict[int, Operation] = {o.id: o for o in h.ops}
    if sorted(order) != sorted(by_id):
        return False
    seq = [by_id[i] for i in order]
    for i, earlier in enumerate(seq):
        for later in seq[i + 1:]:
            if not earlier.inv < later.res:
                return False
    state = initial_state(h.adt)
    for o in seq:
        state = step(h.adt, state, AbstractOp(o.method, o.value))
        if state is REJECT:
            return False
    return True
