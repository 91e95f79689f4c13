"""
Histories of timed operations on a single object.
Core types, the two text formats, and well-formedness/unambiguity validation.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from enum import Enum
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

logger = logging.getLogger(__name__)

# Dense index reserved for the empty-operation sentinel; real values start at 1.
EMPTY = 0

_INT64_MIN = -(2 ** 63)
_INT64_MAX = 2 ** 63 - 1


class AdtKind(str, Enum):
    """The abstract data types a history can be recorded against."""

    REGISTER = "register"
    SET = "set"
    STACK = "stack"
    QUEUE = "queue"
    PRIORITY_QUEUE = "priority_queue"

    @classmethod
    def parse(cls, text: str) -> "AdtKind":
        """Accept both `priority_queue` and `priority-queue` spellings."""
        try:
            return cls(text.strip().lower().replace("-", "_"))
        except ValueError:
            raise ValueError(f"unknown ADT '{text}'") from None


class Method(str, Enum):
    WRITE = "write"
    READ = "read"
    INSERT_OK = "insert_ok"
    INSERT_FAIL = "insert_fail"
    DELETE_OK = "delete_ok"
    DELETE_FAIL = "delete_fail"
    CONTAINS_TRUE = "contains_true"
    CONTAINS_FALSE = "contains_false"
    PUSH = "push"
    POP = "pop"
    PEEK = "peek"
    EMPTY = "empty"
    ENQ = "enq"
    DEQ = "deq"


ADT_METHODS: Dict[AdtKind, FrozenSet[Method]] = {
    AdtKind.REGISTER: frozenset({Method.WRITE, Method.READ}),
    AdtKind.SET: frozenset({
        Method.INSERT_OK, Method.INSERT_FAIL, Method.DELETE_OK,
        Method.DELETE_FAIL, Method.CONTAINS_TRUE, Method.CONTAINS_FALSE,
    }),
    AdtKind.STACK: frozenset({Method.PUSH, Method.POP, Method.PEEK, Method.EMPTY}),
    AdtKind.QUEUE: frozenset({Method.ENQ, Method.DEQ, Method.PEEK, Method.EMPTY}),
    AdtKind.PRIORITY_QUEUE: frozenset({Method.ENQ, Method.DEQ, Method.PEEK, Method.EMPTY}),
}

ADD_METHOD: Dict[AdtKind, Method] = {
    AdtKind.REGISTER: Method.WRITE,
    AdtKind.SET: Method.INSERT_OK,
    AdtKind.STACK: Method.PUSH,
    AdtKind.QUEUE: Method.ENQ,
    AdtKind.PRIORITY_QUEUE: Method.ENQ,
}

# Registers have no remove method.
REMOVE_METHOD: Dict[AdtKind, Optional[Method]] = {
    AdtKind.REGISTER: None,
    AdtKind.SET: Method.DELETE_OK,
    AdtKind.STACK: Method.POP,
    AdtKind.QUEUE: Method.DEQ,
    AdtKind.PRIORITY_QUEUE: Method.DEQ,
}


class HistoryParseError(ValueError):
    """Raised when a history file does not follow the ops/events grammar."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class HistoryValidationError(ValueError):
    """Raised when a history is ill-formed or ambiguous."""

    def __init__(self, violations: Sequence[str] = (), ambiguous: Sequence[int] = ()):
        self.violations = list(violations)
        self.ambiguous = list(ambiguous)
        parts = list(self.violations)
        if self.ambiguous:
            parts.append(f"ambiguous values: {self.ambiguous}")
        super().__init__("; ".join(parts) or "invalid history")


@dataclass(frozen=True, slots=True)
class Operation:
    """One method call: ⟨id, proc, method, value, inv, res⟩.

    `value` is a dense value index (EMPTY for the empty operation).
    """

    id: int
    proc: str
    method: Method
    value: int
    inv: int
    res: int


class History:
    """An immutable set of operations on one object.

    Operations are kept sorted by id. `value_ids[i]` is the original id of
    dense value index i (index 0 is the EMPTY sentinel).
    """

    __slots__ = ("adt", "ops", "value_ids", "warnings", "_by_value")

    def __init__(self, adt: AdtKind, ops: Iterable[Operation],
                 value_ids: Sequence[int] = (0,), warnings: Sequence[str] = ()):
        self.adt = adt
        self.ops: Tuple[Operation, ...] = tuple(sorted(ops, key=lambda o: o.id))
        self.value_ids: Tuple[int, ...] = tuple(value_ids) or (0,)
        self.warnings: Tuple[str, ...] = tuple(warnings)
        self._by_value: Optional[Dict[int, List[Operation]]] = None

    @classmethod
    def from_raw(cls, adt: AdtKind, rows: Iterable[Tuple[int, str, Method, Optional[int], int, int]],
                 warnings: Sequence[str] = ()) -> "History":
        """Build a history from rows carrying original value ids (None for EMPTY).

        Original ids are mapped to dense indices in ascending order, so the
        numeric order on indices is the order on original ids.
        """
        rows = list(rows)
        originals = sorted({r[3] for r in rows if r[3] is not None})
        index = {v: i + 1 for i, v in enumerate(originals)}
        ops = [
            Operation(op_id, proc, method, EMPTY if value is None else index[value], inv, res)
            for op_id, proc, method, value, inv, res in rows
        ]
        return cls(adt, ops, (0, *originals), warnings)

    def with_ops(self, ops: Iterable[Operation]) -> "History":
        """Same object and value numbering, different operations."""
        return History(self.adt, ops, self.value_ids, self.warnings)

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self) -> Iterator[Operation]:
        return iter(self.ops)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, History):
            return NotImplemented
        return (self.adt, self.ops, self.value_ids) == (other.adt, other.ops, other.value_ids)

    def __hash__(self) -> int:
        return hash((self.adt, self.ops))

    def __repr__(self) -> str:
        return f"History({self.adt.value}, {len(self.ops)} ops)"

    @property
    def values(self) -> FrozenSet[int]:
        """Dense indices of the values occurring in the history (EMPTY excluded)."""
        return frozenset(o.value for o in self.ops if o.value != EMPTY)

    @property
    def times(self) -> List[int]:
        """Sorted distinct event times."""
        return sorted({t for o in self.ops for t in (o.inv, o.res)})

    def by_value(self) -> Dict[int, List[Operation]]:
        """Operations grouped by value (EMPTY ops under key EMPTY)."""
        if self._by_value is None:
            groups: Dict[int, List[Operation]] = {}
            for o in self.ops:
                groups.setdefault(o.value, []).append(o)
            self._by_value = groups
        return self._by_value

    def original_value(self, v: int) -> Optional[int]:
        return None if v == EMPTY else self.value_ids[v]


def canonical_set_methods(h: History) -> History:
    """Rewrite contains_true/contains_false as insert_fail/delete_fail."""
    if h.adt is not AdtKind.SET:
        return h
    rename = {Method.CONTAINS_TRUE: Method.INSERT_FAIL, Method.CONTAINS_FALSE: Method.DELETE_FAIL}
    if not any(o.method in rename for o in h.ops):
        return h
    return h.with_ops(replace(o, method=rename.get(o.method, o.method)) for o in h.ops)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def _parse_int(token: str, what: str, line: int) -> int:
    try:
        n = int(token)
    except ValueError:
        raise HistoryParseError(f"expected integer {what}, got '{token}'", line) from None
    if not _INT64_MIN <= n <= _INT64_MAX:
        raise HistoryParseError(f"{what} {n} does not fit in 64 bits", line)
    return n


def _parse_method(token: str, adt: AdtKind, line: int) -> Method:
    try:
        method = Method(token)
    except ValueError:
        raise HistoryParseError(f"unknown method '{token}'", line) from None
    if method not in ADT_METHODS[adt]:
        raise HistoryParseError(f"method '{token}' is not defined for {adt.value}", line)
    return method


def _parse_value(token: str, method: Method, line: int) -> Optional[int]:
    if token == "-":
        if method is not Method.EMPTY:
            raise HistoryParseError(f"'-' value is only legal with 'empty', not '{method.value}'", line)
        return None
    if method is Method.EMPTY:
        raise HistoryParseError("'empty' takes the value '-'", line)
    value = _parse_int(token, "value", line)
    if value < 1:
        raise HistoryParseError(f"values must be >= 1, got {value}", line)
    return value


def parse_history(text: Union[str, bytes], fmt: str = "ops", adt: Optional[AdtKind] = None) -> History:
    """
    Parse a history in the `ops` or `events` format.

    Args:
        text: File contents (bytes are decoded as UTF-8)
        fmt: Either "ops" or "events"
        adt: ADT to assume when the file has no `adt` header

    Returns:
        The parsed History. Unclosed invocations in `events` input are dropped
        and reported in `History.warnings`.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    if fmt not in ("ops", "events"):
        raise ValueError(f"unknown history format '{fmt}'")

    header: Optional[AdtKind] = None
    body: List[Tuple[int, List[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = stripped.split()
        if tokens[0] == "adt":
            if header is not None or body:
                raise HistoryParseError("'adt' header must appear once, before any operation", lineno)
            if len(tokens) != 2:
                raise HistoryParseError("expected 'adt <kind>'", lineno)
            try:
                header = AdtKind.parse(tokens[1])
            except ValueError as e:
                raise HistoryParseError(str(e), lineno) from None
            continue
        body.append((lineno, tokens))

    if header is not None and adt is not None and header is not adt:
        raise HistoryParseError(f"file declares adt {header.value} but {adt.value} was requested")
    kind = header or adt
    if kind is None:
        raise HistoryParseError("missing 'adt <kind>' header")

    if fmt == "ops":
        return _parse_ops(kind, body)
    return _parse_events(kind, body)


def _parse_ops(adt: AdtKind, body: List[Tuple[int, List[str]]]) -> History:
    rows = []
    seen = set()
    for lineno, tokens in body:
        if tokens[0] != "op" or len(tokens) != 7:
            raise HistoryParseError("expected 'op <id> <proc> <method> <value|-> <t_inv> <t_res>'", lineno)
        op_id = _parse_int(tokens[1], "operation id", lineno)
        if op_id < 1:
            raise HistoryParseError(f"operation ids must be >= 1, got {op_id}", lineno)
        if op_id in seen:
            raise HistoryParseError(f"duplicate operation id {op_id}", lineno)
        seen.add(op_id)
        method = _parse_method(tokens[3], adt, lineno)
        value = _parse_value(tokens[4], method, lineno)
        inv = _parse_int(tokens[5], "invocation time", lineno)
        res = _parse_int(tokens[6], "response time", lineno)
        rows.append((op_id, tokens[2], method, value, inv, res))
    return History.from_raw(adt, rows)


def _parse_events(adt: AdtKind, body: List[Tuple[int, List[str]]]) -> History:
    rows = []
    warnings = []
    # proc -> (op id, method, value, inv time, line)
    pending: Dict[str, Tuple[int, Method, Optional[int], int, int]] = {}
    next_id = 1
    for tick, (lineno, tokens) in enumerate(body, start=1):
        kind = tokens[0]
        if kind == "inv":
            if len(tokens) != 4:
                raise HistoryParseError("expected 'inv <proc> <method> <value|->'", lineno)
            proc = tokens[1]
            if proc in pending:
                raise HistoryParseError(f"process {proc} invoked again before responding", lineno)
            method = _parse_method(tokens[2], adt, lineno)
            value = _parse_value(tokens[3], method, lineno)
            pending[proc] = (next_id, method, value, tick, lineno)
            next_id += 1
        elif kind == "res":
            if len(tokens) != 2:
                raise HistoryParseError("expected 'res <proc>'", lineno)
            proc = tokens[1]
            if proc not in pending:
                raise HistoryParseError(f"response of process {proc} with no pending invocation", lineno)
            op_id, method, value, inv, _ = pending.pop(proc)
            rows.append((op_id, proc, method, value, inv, tick))
        else:
            raise HistoryParseError(f"expected 'inv' or 'res', got '{kind}'", lineno)

    for proc, (op_id, method, _, _, lineno) in sorted(pending.items(), key=lambda kv: kv[1][0]):
        message = f"invocation of {method.value} by {proc} at line {lineno} never responded; dropped"
        logger.warning(message)
        warnings.append(message)
    return History.from_raw(adt, rows, warnings)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def _value_token(h: History, o: Operation) -> str:
    return "-" if o.value == EMPTY else str(h.value_ids[o.value])


def serialize_history(h: History, fmt: str = "ops") -> str:
    """
    Render a history in the `ops` or `events` format.

    Raises:
        ValueError: for `events` when two events share a timestamp
    """
    lines = [f"adt {h.adt.value}"]
    if fmt == "ops":
        for o in h.ops:
            lines.append(f"op {o.id} {o.proc} {o.method.value} {_value_token(h, o)} {o.inv} {o.res}")
    elif fmt == "events":
        events = []
        for o in h.ops:
            events.append((o.inv, f"inv {o.proc} {o.method.value} {_value_token(h, o)}"))
            events.append((o.res, f"res {o.proc}"))
        events.sort(key=lambda e: e[0])
        for (t1, _), (t2, _) in zip(events, events[1:]):
            if t1 == t2:
                raise ValueError(f"events format needs distinct timestamps; {t1} occurs twice")
        lines.extend(line for _, line in events)
    else:
        raise ValueError(f"unknown history format '{fmt}'")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def validate_well_formed(h: History) -> List[str]:
    """Return the well-formedness violations of `h` (empty list when fine)."""
    violations = []
    per_proc: Dict[str, List[Operation]] = {}
    for o in h.ops:
        if o.method not in ADT_METHODS[h.adt]:
            violations.append(f"op {o.id}: method {o.method.value} not defined for {h.adt.value}")
        if (o.method is Method.EMPTY) != (o.value == EMPTY):
            violations.append(f"op {o.id}: the empty sentinel must go with method 'empty'")
        if not o.inv < o.res:
            violations.append(f"op {o.id}: invocation {o.inv} is not before response {o.res}")
        per_proc.setdefault(o.proc, []).append(o)

    for proc, ops in per_proc.items():
        ops.sort(key=lambda o: (o.inv, o.res))
        for a, b in zip(ops, ops[1:]):
            if a.res >= b.inv:
                violations.append(f"process {proc}: ops {a.id} and {b.id} overlap")
    return violations


def validate_unambiguous(h: History) -> List[int]:
    """Return the original ids of values violating unambiguity, ascending.

    Every value needs exactly one add operation and at most one remove.
    """
    add = ADD_METHOD[h.adt]
    remove = REMOVE_METHOD[h.adt]
    offending = []
    for v, ops in h.by_value().items():
        if v == EMPTY:
            continue
        adds = sum(1 for o in ops if o.method is add)
        removes = sum(1 for o in ops if o.method is remove)
        if adds != 1 or removes > 1:
            offending.append(h.value_ids[v])
    return sorted(offending)


def project(h: History, *, value: Optional[int] = None,
            methods: Optional[Iterable[Method]] = None, proc: Optional[str] = None) -> History:
    """Maximal subhistory matching every given selector."""
    method_set = frozenset(methods) if methods is not None else None
    return h.with_ops(
        o for o in h.ops
        if (value is None or o.value == value)
        and (method_set is None or o.method in method_set)
        and (proc is None or o.proc == proc)
    )
