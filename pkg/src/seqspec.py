"""
Sequential specifications of the supported ADTs as labelled transition systems.

States are immutable Python values so they can be hashed by the oracle:
register -> value index or UNINIT, set -> frozenset, stack/queue/priority
queue -> tuple. The priority-queue tuple is kept sorted ascending and both
its deq and peek act on the tail, i.e. on the maximum.
"""
from __future__ import annotations

from bisect import insort
from typing import Hashable, Iterable, List, NamedTuple, Optional, Sequence

from src.model import EMPTY, AdtKind, Method

AdtState = Hashable


class _Sentinel:
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name

    def __repr__(self) -> str:
        return self.name


UNINIT = _Sentinel("UNINIT")
REJECT = _Sentinel("REJECT")


class AbstractOp(NamedTuple):
    method: Method
    value: int


def initial_state(adt: AdtKind) -> AdtState:
    if adt is AdtKind.REGISTER:
        return UNINIT
    if adt is AdtKind.SET:
        return frozenset()
    return ()


def _step_register(s, m: Method, v: int):
    if m is Method.WRITE:
        return v
    if m is Method.READ and s == v:
        return s
    return REJECT


def _step_set(s: frozenset, m: Method, v: int):
    present = v in s
    if m is Method.INSERT_OK:
        return REJECT if present else s | {v}
    if m is Method.DELETE_OK:
        return s - {v} if present else REJECT
    if m in (Method.INSERT_FAIL, Method.CONTAINS_TRUE):
        return s if present else REJECT
    if m in (Method.DELETE_FAIL, Method.CONTAINS_FALSE):
        return REJECT if present else s
    return REJECT


def _step_sequence(adt: AdtKind, s: tuple, m: Method, v: int):
    if m is Method.EMPTY:
        return s if not s else REJECT
    if m in (Method.PUSH, Method.ENQ):
        if adt is AdtKind.STACK:
            return s + (v,)
        if adt is AdtKind.QUEUE:
            return (v,) + s
        grown = list(s)
        insort(grown, v)
        return tuple(grown)
    # pop/deq/peek all observe the tail
    if not s or s[-1] != v:
        return REJECT
    if m is Method.PEEK:
        return s
    return s[:-1]


def step(adt: AdtKind, s: AdtState, a: AbstractOp) -> AdtState:
    """
    Apply one abstract operation.

    Returns:
        The successor state, or REJECT when no transition applies
    """
    if adt is AdtKind.REGISTER:
        return _step_register(s, a.method, a.value)
    if adt is AdtKind.SET:
        return _step_set(s, a.method, a.value)
    return _step_sequence(adt, s, a.method, a.value)


def run(adt: AdtKind, seq: Iterable[AbstractOp]) -> AdtState:
    """Fold `step` over `seq`; REJECT as soon as one step rejects."""
    s = initial_state(adt)
    for a in seq:
        s = step(adt, s, a)
        if s is REJECT:
            return REJECT
    return s


def is_member(adt: AdtKind, seq: Sequence[AbstractOp]) -> bool:
    return run(adt, seq) is not REJECT


def project_abstract(seq: Iterable[AbstractOp], values: Iterable[int]) -> List[AbstractOp]:
    """Order-preserving filter keeping ops whose value is in `values`.

    EMPTY is kept only when it is part of `values`.
    """
    keep = frozenset(values)
    return [a for a in seq if a.value in keep]


def abstract_ops(spec: str) -> List[AbstractOp]:
    """Build a sequence from compact text such as ``"push 1, pop 1, empty"``."""
    seq = []
    for item in spec.split(","):
        tokens = item.split()
        if not tokens:
            continue
        method = Method(tokens[0])
        value: Optional[int] = EMPTY if method is Method.EMPTY else int(tokens[1])
        seq.append(AbstractOp(method, value))
    return seq
