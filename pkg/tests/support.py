"""
Shared helpers for the test suite: history builders, fixture loading and
hypothesis strategies for small random histories.
"""
import os
import sys
from typing import List, Optional, Sequence, Tuple

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from hypothesis import strategies as st

from src import config
from src.generator import GenConfig, MutationKind, generate_linearizable, mutate
from src.model import ADD_METHOD, REMOVE_METHOD, AdtKind, History, Method, parse_history

Row = Tuple[int, str, str, Optional[int], int, int]

_OBSERVERS = {
    AdtKind.REGISTER: [Method.READ],
    AdtKind.SET: [Method.INSERT_FAIL, Method.DELETE_FAIL, Method.CONTAINS_TRUE, Method.CONTAINS_FALSE],
    AdtKind.STACK: [Method.PEEK],
    AdtKind.QUEUE: [Method.PEEK],
    AdtKind.PRIORITY_QUEUE: [Method.PEEK],
}


def make_history(adt: AdtKind, rows: Sequence[Row]) -> History:
    """Rows are (id, proc, method name, original value or None, inv, res)."""
    return History.from_raw(adt, [(i, p, Method(m), v, inv, res) for i, p, m, v, inv, res in rows])


def load_fixture(name: str, fmt: str = "ops") -> History:
    path = config.HISTORIES_PATH / f"{name}.hist"
    return parse_history(path.read_text(encoding="utf-8"), fmt)


@st.composite
def windows(draw, horizon: int = 16) -> Tuple[int, int]:
    inv = draw(st.integers(min_value=1, max_value=horizon))
    length = draw(st.integers(min_value=1, max_value=6))
    return inv, inv + length


@st.composite
def small_histories(draw, adt: AdtKind, max_ops: int = 8, max_values: int = 4) -> History:
    """
    Well-formed, unambiguous histories; every op runs on its own process.

    Each value gets exactly one add, at most one remove and a few
    observers; stack/queue/priority-queue histories may carry empty ops.
    """
    n_values = draw(st.integers(min_value=1, max_value=max_values))
    methods: List[Tuple[Method, Optional[int]]] = []
    for v in range(1, n_values + 1):
        methods.append((ADD_METHOD[adt], v))
        remove = REMOVE_METHOD[adt]
        if remove is not None and draw(st.booleans()):
            methods.append((remove, v))
        for _ in range(draw(st.integers(min_value=0, max_value=2))):
            methods.append((draw(st.sampled_from(_OBSERVERS[adt])), v))
    if adt in (AdtKind.STACK, AdtKind.QUEUE, AdtKind.PRIORITY_QUEUE):
        for _ in range(draw(st.integers(min_value=0, max_value=1))):
            methods.append((Method.EMPTY, None))
    methods = methods[:max_ops]

    rows = []
    for op_id, (method, value) in enumerate(methods, start=1):
        inv, res = draw(windows())
        rows.append((op_id, f"p{op_id}", method, value, inv, res))
    return History.from_raw(adt, rows)


# DROP_ADD is left out: it yields ambiguous histories that never reach a checker.
_DIFF_MUTATIONS = [None, MutationKind.SWAP_REMOVE_VALUES, MutationKind.SHRINK_WINDOW, MutationKind.SHIFT_WINDOW]


@st.composite
def generated_histories(draw, adt: AdtKind, max_ops: int = 10, max_values: int = 4,
                        mutated: bool = True) -> History:
    """Generator output with a few values, optionally mutated; processes run several ops each."""
    cfg = GenConfig(
        adt,
        draw(st.integers(min_value=1, max_value=max_ops)),
        n_procs=draw(st.integers(min_value=1, max_value=3)),
        seed=draw(st.integers(min_value=0, max_value=2**31 - 1)),
        max_values=draw(st.integers(min_value=1, max_value=max_values)),
        relax=draw(st.integers(min_value=0, max_value=4)),
    )
    h = generate_linearizable(cfg)
    kind = draw(st.sampled_from(_DIFF_MUTATIONS)) if mutated else None
    if kind is None:
        return h
    return mutate(h, kind, seed=draw(st.integers(min_value=0, max_value=2**31 - 1))).history
