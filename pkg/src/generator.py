"""
Deterministic workload generator.

generate_linearizable() simulates the sequential specification with seeded
random legal actions, places op i's linearization point at 4(i+1), assigns
ops to processes and widens every window around its point without crossing
the midpoint to the same process's neighbors. The witness order is legal
and realizable, so the output is linearizable by construction.

mutate() perturbs a history into a candidate violation; its verdict is
unknown until an oracle or checker looks at it.
"""
from __future__ import annotations

import logging
from bisect import insort
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from src.model import ADD_METHOD, REMOVE_METHOD, AdtKind, History, Method, Operation

logger = logging.getLogger(__name__)

_GAP = 4


class MutationKind(str, Enum):
    SWAP_REMOVE_VALUES = "swap_remove_values"
    SHRINK_WINDOW = "shrink_window"
    SHIFT_WINDOW = "shift_window"
    DROP_ADD = "drop_add"


class Mutation(NamedTuple):
    history: History
    changed: bool


@dataclass(frozen=True)
class GenConfig:
    """
    Workload parameters.

    fail_ratio defaults to 0.1 for sets and empty_ratio to 0.05 for
    stacks/queues/priority queues; both are zero elsewhere.
    """

    adt: AdtKind
    n_ops: int
    n_procs: int = 4
    seed: int = 0
    peek_ratio: float = 0.2
    fail_ratio: Optional[float] = None
    empty_ratio: Optional[float] = None
    relax: int = 3
    max_values: Optional[int] = None
    roles: str = "mixed"
    n_producers: Optional[int] = None
    distinct_times: bool = True

    @property
    def effective_fail_ratio(self) -> float:
        if self.fail_ratio is not None:
            return self.fail_ratio
        return 0.1 if self.adt is AdtKind.SET else 0.0

    @property
    def effective_empty_ratio(self) -> float:
        if self.empty_ratio is not None:
            return self.empty_ratio
        return 0.0 if self.adt in (AdtKind.SET, AdtKind.REGISTER) else 0.05

    @property
    def effective_producers(self) -> int:
        return self.n_producers if self.n_producers is not None else max(1, self.n_procs // 2)

    def validate(self) -> None:
        if self.n_ops < 0:
            raise ValueError("n_ops must be non-negative")
        if self.n_procs < 1:
            raise ValueError("n_procs must be at least 1")
        if self.relax < 0:
            raise ValueError("relax must be non-negative")
        if self.max_values is not None and self.max_values < 1:
            raise ValueError("max_values must be at least 1")
        for name in ("peek_ratio", "fail_ratio", "empty_ratio"):
            value = getattr(self, name)
            if value is not None and not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.effective_fail_ratio > 0 and self.adt is not AdtKind.SET:
            raise ValueError("fail_ratio only applies to set workloads")
        if self.effective_empty_ratio > 0 and self.adt in (AdtKind.SET, AdtKind.REGISTER):
            raise ValueError(f"{self.adt.value} workloads have no empty operation")
        if self.roles not in ("mixed", "producer_consumer"):
            raise ValueError(f"unknown roles '{self.roles}'")
        if self.roles == "producer_consumer" and not 1 <= self.effective_producers < self.n_procs:
            raise ValueError("producer_consumer needs 1 <= n_producers < n_procs")


def _simulate(cfg: GenConfig, rng: np.random.Generator) -> List[Tuple[Method, Optional[int]]]:
    """Random legal sequential run: list of (method, value) with None for EMPTY."""
    n = cfg.n_ops
    pool = (rng.permutation(max(n, 1)) + 1).tolist()
    cap = min(len(pool), cfg.max_values or len(pool))
    action_draw = rng.random(n)
    pick_draw = rng.random(n)
    flavor_draw = rng.random(n)
    fail = cfg.effective_fail_ratio
    empty = cfg.effective_empty_ratio
    adt = cfg.adt

    used = 0
    current: Optional[int] = None       # register
    present: List[int] = []             # set, stack, priority queue (ascending)
    absent: List[int] = []              # set: deleted values
    fifo: deque = deque()               # queue; left end is the front
    seq: List[Tuple[Method, Optional[int]]] = []

    for i in range(n):
        fresh = used < cap
        if adt is AdtKind.REGISTER:
            actions = [("add", 1.0 if fresh else 0.0), ("read", 1.0 if current is not None else 0.0)]
        elif adt is AdtKind.SET:
            actions = [
                ("add", 1.0 if fresh else 0.0),
                ("remove", 1.0 if present else 0.0),
                ("insert_fail", fail if present else 0.0),
                ("delete_fail", fail if absent else 0.0),
            ]
        else:
            size = len(fifo) if adt is AdtKind.QUEUE else len(present)
            actions = [
                ("add", 1.0 if fresh else 0.0),
                ("remove", 1.0 if size else 0.0),
                ("peek", cfg.peek_ratio if size else 0.0),
                ("empty", empty if not size else 0.0),
            ]
        total = sum(w for _, w in actions)
        if total <= 0:
            logger.debug("no legal action after %d ops; stopping early", i)
            break
        mark = action_draw[i] * total
        action = actions[-1][0]
        for name, weight in actions:
            if mark < weight:
                action = name
                break
            mark -= weight

        if action == "add":
            v = pool[used]
            used += 1
            if adt is AdtKind.REGISTER:
                current = v
                seq.append((Method.WRITE, v))
            elif adt is AdtKind.SET:
                present.append(v)
                seq.append((Method.INSERT_OK, v))
            elif adt is AdtKind.STACK:
                present.append(v)
                seq.append((Method.PUSH, v))
            elif adt is AdtKind.QUEUE:
                fifo.append(v)
                seq.append((Method.ENQ, v))
            else:
                insort(present, v)
                seq.append((Method.ENQ, v))
        elif action == "read":
            seq.append((Method.READ, current))
        elif action == "remove":
            if adt is AdtKind.SET:
                v = present.pop(int(pick_draw[i] * len(present)))
                absent.append(v)
                seq.append((Method.DELETE_OK, v))
            elif adt is AdtKind.QUEUE:
                seq.append((Method.DEQ, fifo.popleft()))
            else:
                seq.append((REMOVE_METHOD[adt], present.pop()))
        elif action == "insert_fail":
            v = present[int(pick_draw[i] * len(present))]
            observe = flavor_draw[i] < cfg.peek_ratio
            seq.append((Method.CONTAINS_TRUE if observe else Method.INSERT_FAIL, v))
        elif action == "delete_fail":
            v = absent[int(pick_draw[i] * len(absent))]
            observe = flavor_draw[i] < cfg.peek_ratio
            seq.append((Method.CONTAINS_FALSE if observe else Method.DELETE_FAIL, v))
        elif action == "peek":
            seq.append((Method.PEEK, fifo[0] if adt is AdtKind.QUEUE else present[-1]))
        else:
            seq.append((Method.EMPTY, None))
    return seq


def _assign_processes(cfg: GenConfig, seq: List[Tuple[Method, Optional[int]]]) -> List[int]:
    if cfg.roles == "mixed":
        return [i % cfg.n_procs for i in range(len(seq))]
    producers = cfg.effective_producers
    consumers = cfg.n_procs - producers
    add = ADD_METHOD[cfg.adt]
    made = taken = 0
    procs = []
    for method, _ in seq:
        if method is add:
            procs.append(made % producers)
            made += 1
        else:
            procs.append(producers + taken % consumers)
            taken += 1
    return procs


def generate_linearizable(cfg: GenConfig) -> History:
    """
    Build a linearizable, unambiguous, well-formed history.

    Args:
        cfg: Workload parameters (validated here)

    Returns:
        The generated History; identical configs give identical histories
    """
    cfg.validate()
    rng = np.random.default_rng(cfg.seed)
    seq = _simulate(cfg, rng)
    m = len(seq)
    procs = _assign_processes(cfg, seq)

    points = _GAP * (np.arange(m, dtype=np.int64) + 1)
    left = rng.integers(0, cfg.relax + 1, size=m)
    right = rng.integers(0, cfg.relax + 1, size=m)
    inv = points - 1 - left
    res = points + 1 + right

    lower = np.ones(m, dtype=np.int64)
    upper = np.full(m, np.iinfo(np.int64).max, dtype=np.int64)
    last_seen = {}
    for i, p in enumerate(procs):
        prev = last_seen.get(p)
        if prev is not None:
            mid = (points[prev] + points[i]) // 2
            upper[prev] = mid
            lower[i] = mid + 1
        last_seen[p] = i
    inv = np.maximum(inv, lower)
    res = np.minimum(res, upper)

    if cfg.distinct_times and m:
        times = np.concatenate([inv, res])
        kinds = np.concatenate([np.ones(m, dtype=np.int64), np.zeros(m, dtype=np.int64)])
        order = np.lexsort((np.arange(2 * m), kinds, times))
        ranks = np.empty(2 * m, dtype=np.int64)
        ranks[order] = np.arange(1, 2 * m + 1)
        inv, res = ranks[:m], ranks[m:]

    rows = [
        (i + 1, f"p{procs[i] + 1}", method, value, int(inv[i]), int(res[i]))
        for i, (method, value) in enumerate(seq)
    ]
    logger.debug("generated %d %s ops (seed %d)", m, cfg.adt.value, cfg.seed)
    return History.from_raw(cfg.adt, rows)


def _neighbors(h: History, o: Operation) -> Tuple[Optional[Operation], Optional[Operation]]:
    same = sorted((x for x in h.ops if x.proc == o.proc), key=lambda x: x.inv)
    i = next(k for k, x in enumerate(same) if x.id == o.id)
    return (same[i - 1] if i > 0 else None), (same[i + 1] if i + 1 < len(same) else None)


def mutate(h: History, kind: MutationKind, seed: int, max_shift: int = 3) -> Mutation:
    """
    Apply one seeded perturbation.

    Returns:
        Mutation(history, changed); changed is False when the mutation does
        not apply (e.g. fewer than two remove ops to swap)
    """
    rng = np.random.default_rng(seed)
    kind = MutationKind(kind)
    ops = list(h.ops)

    if kind is MutationKind.SWAP_REMOVE_VALUES:
        remove = REMOVE_METHOD[h.adt]
        slots = [i for i, o in enumerate(ops) if remove is not None and o.method is remove]
        if len(slots) < 2:
            return Mutation(h, False)
        a, b = (int(x) for x in rng.choice(len(slots), size=2, replace=False))
        i, j = slots[a], slots[b]
        ops[i], ops[j] = (
            Operation(ops[i].id, ops[i].proc, ops[i].method, ops[j].value, ops[i].inv, ops[i].res),
            Operation(ops[j].id, ops[j].proc, ops[j].method, ops[i].value, ops[j].inv, ops[j].res),
        )
        return Mutation(h.with_ops(ops), True)

    if kind is MutationKind.SHRINK_WINDOW:
        slots = [i for i, o in enumerate(ops) if o.res - o.inv >= 2]
        if not slots:
            return Mutation(h, False)
        i = slots[int(rng.integers(len(slots)))]
        o = ops[i]
        new_inv = int(rng.integers(o.inv, o.res))
        new_res = int(rng.integers(new_inv + 1, o.res + 1))
        if (new_inv, new_res) == (o.inv, o.res):
            new_inv = o.inv + 1
        ops[i] = Operation(o.id, o.proc, o.method, o.value, new_inv, new_res)
        return Mutation(h.with_ops(ops), True)

    if kind is MutationKind.SHIFT_WINDOW:
        for i in rng.permutation(len(ops)).tolist():
            o = ops[i]
            prev, nxt = _neighbors(h, o)
            lo = -max_shift if prev is None else max(-max_shift, prev.res - o.inv + 1)
            hi = max_shift if nxt is None else min(max_shift, nxt.inv - o.res - 1)
            deltas = [d for d in range(lo, hi + 1) if d != 0]
            if not deltas:
                continue
            d = deltas[int(rng.integers(len(deltas)))]
            ops[i] = Operation(o.id, o.proc, o.method, o.value, o.inv + d, o.res + d)
            return Mutation(h.with_ops(ops), True)
        return Mutation(h, False)

    # DROP_ADD leaves a value without its add, so the result is ambiguous
    add = ADD_METHOD[h.adt]
    slots = [i for i, o in enumerate(ops) if o.method is add]
    if not slots:
        return Mutation(h, False)
    i = slots[int(rng.integers(len(slots)))]
    del ops[i]
    return Mutation(h.with_ops(ops), True)
