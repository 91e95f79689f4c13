"""
Index structures shared by the fast checkers.

PartitionIndex
    Cuts the time line at the distinct event times. Partition p (0..k) is
    the open interval (times[p-1], times[p]) with infinite ends at 0 and k.
    Every threshold the checkers compare against is an event time, so a
    point inside an open window exists iff a partition inside it exists.

MinTagSegTree, CoverSegTree
    Array segment trees with range add. Adds are stored on the nodes they
    cover (t[p] = min(children) + d[p]) so a global query reads the root.

OpIntervalTree
    Stabbing index over operation spans: ops sorted by first partition, a
    max-tree over last partition, so a search enumerates only the hits.
"""
from __future__ import annotations

from bisect import bisect_right
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from src.model import Operation

# A partition range is the half-open interval [start, stop) of partition numbers.
PartitionRange = Tuple[int, int]

_DISABLED = 1 << 40


class PartitionIndex:
    """Maps event times to partitions of the time line."""

    def __init__(self, times: Iterable[int]):
        self.times: List[int] = sorted(set(times))
        self._position: Dict[int, int] = {t: i for i, t in enumerate(self.times)}

    @property
    def n_partitions(self) -> int:
        return len(self.times) + 1

    def bounds(self, p: int) -> Tuple[Optional[int], Optional[int]]:
        """Open interval of partition p; None stands for an infinite end."""
        lo = self.times[p - 1] if p > 0 else None
        hi = self.times[p] if p < len(self.times) else None
        return lo, hi

    def between(self, lo: int, hi: int) -> PartitionRange:
        """Partitions lying inside the open interval (lo, hi); lo, hi are event times."""
        start = self._position[lo] + 1
        stop = self._position[hi] + 1
        return (start, stop) if stop > start else (start, start)


def build_partitions(ops: Iterable[Operation]) -> PartitionIndex:
    return PartitionIndex(t for o in ops for t in (o.inv, o.res))


def interval_to_partition_range(pi: PartitionIndex, lo: int, hi: int) -> PartitionRange:
    """Partitions blocked by the closed critical interval [lo, hi]; empty when hi <= lo."""
    return pi.between(lo, hi)


def op_span_to_partition_range(pi: PartitionIndex, o: Operation) -> PartitionRange:
    """Partitions strictly inside (inv(o), res(o))."""
    return pi.between(o.inv, o.res)


def _capacity(n: int) -> int:
    size = 1
    while size < n:
        size <<= 1
    return size


class MinTagSegTree:
    """
    Cells ⟨weight, tag⟩ with range add and a global argmin.

    The tag reported with the minimum belongs to the same cell as the weight,
    so when the weight is 1 it names the only interval covering the cell
    (tags are sums of value indices).
    """

    def __init__(self, n: int):
        if n <= 0:
            raise ValueError("MinTagSegTree needs at least one cell")
        self.n = n
        self.size = _capacity(n)
        size = self.size
        self._w = [0] * (2 * size)
        self._tag = [0] * (2 * size)
        self._dw = [0] * size
        self._dtag = [0] * size
        # padding cells outweigh disabled ones
        for leaf in range(size + n, 2 * size):
            self._w[leaf] = _DISABLED << 1
        for p in range(size - 1, 0, -1):
            self._pull(p)

    def _pull(self, p: int) -> None:
        left, right = 2 * p, 2 * p + 1
        c = left if self._w[left] <= self._w[right] else right
        self._w[p] = self._w[c] + self._dw[p]
        self._tag[p] = self._tag[c] + self._dtag[p]

    def _rebuild(self, a: int, b: int) -> None:
        """Re-pull the ancestors of leaves a <= b, shared ancestors once."""
        w, tag, dw, dtag = self._w, self._tag, self._dw, self._dtag
        a >>= 1
        b >>= 1
        while a:
            left = a << 1
            c = left if w[left] <= w[left + 1] else left + 1
            w[a] = w[c] + dw[a]
            tag[a] = tag[c] + dtag[a]
            if b != a:
                left = b << 1
                c = left if w[left] <= w[left + 1] else left + 1
                w[b] = w[c] + dw[b]
                tag[b] = tag[c] + dtag[b]
            a >>= 1
            b >>= 1

    def update_range(self, start: int, stop: int, dw: int, dtag: int) -> None:
        """Add ⟨dw, dtag⟩ to every cell in [start, stop)."""
        if start >= stop:
            return
        if start < 0 or stop > self.n:
            raise IndexError(f"range [{start}, {stop}) outside 0..{self.n}")
        size = self.size
        w, tag, pdw, pdtag = self._w, self._tag, self._dw, self._dtag
        lo, hi = start + size, stop + size
        l0, r0 = lo, hi - 1
        while lo < hi:
            if lo & 1:
                w[lo] += dw
                tag[lo] += dtag
                if lo < size:
                    pdw[lo] += dw
                    pdtag[lo] += dtag
                lo += 1
            if hi & 1:
                hi -= 1
                w[hi] += dw
                tag[hi] += dtag
                if hi < size:
                    pdw[hi] += dw
                    pdtag[hi] += dtag
            lo >>= 1
            hi >>= 1
        self._rebuild(l0, r0)

    def query_min(self) -> Tuple[int, int, int]:
        """Return (cell, weight, tag) of a minimum-weight cell; disabled cells weigh >= 2**40."""
        p = 1
        while p < self.size:
            left = 2 * p
            p = left if self._w[left] <= self._w[left + 1] else left + 1
        return p - self.size, self._w[1], self._tag[1]

    def disable_point(self, pos: int) -> None:
        if not 0 <= pos < self.n:
            raise IndexError(f"cell {pos} outside 0..{self.n}")
        leaf = pos + self.size
        self._w[leaf] += _DISABLED
        self._rebuild(leaf, leaf)

    @staticmethod
    def is_disabled(weight: int) -> bool:
        return weight >= _DISABLED // 2


class CoverSegTree:
    """Coverage counts with range add and range minimum."""

    def __init__(self, n: int):
        if n <= 0:
            raise ValueError("CoverSegTree needs at least one cell")
        self.n = n
        self.size = _capacity(n)
        self._h = self.size.bit_length() - 1
        self._t = [0] * (2 * self.size)
        self._d = [0] * self.size

    def _apply(self, p: int, value: int) -> None:
        self._t[p] += value
        if p < self.size:
            self._d[p] += value

    def _rebuild(self, p: int) -> None:
        while p > 1:
            p >>= 1
            self._t[p] = min(self._t[2 * p], self._t[2 * p + 1]) + self._d[p]

    def _push(self, p: int) -> None:
        for s in range(self._h, 0, -1):
            i = p >> s
            if self._d[i]:
                self._apply(2 * i, self._d[i])
                self._apply(2 * i + 1, self._d[i])
                self._d[i] = 0

    def add_range(self, start: int, stop: int, value: int = 1) -> None:
        if start >= stop:
            return
        if start < 0 or stop > self.n:
            raise IndexError(f"range [{start}, {stop}) outside 0..{self.n}")
        lo, hi = start + self.size, stop + self.size
        l0, r0 = lo, hi - 1
        while lo < hi:
            if lo & 1:
                self._apply(lo, value)
                lo += 1
            if hi & 1:
                hi -= 1
                self._apply(hi, value)
            lo >>= 1
            hi >>= 1
        self._rebuild(l0)
        self._rebuild(r0)

    def min_in_range(self, start: int, stop: int) -> int:
        if start >= stop:
            raise ValueError("min over an empty partition range")
        if start < 0 or stop > self.n:
            raise IndexError(f"range [{start}, {stop}) outside 0..{self.n}")
        lo, hi = start + self.size, stop + self.size
        self._push(lo)
        self._push(hi - 1)
        best = None
        while lo < hi:
            if lo & 1:
                best = self._t[lo] if best is None else min(best, self._t[lo])
                lo += 1
            if hi & 1:
                hi -= 1
                best = self._t[hi] if best is None else min(best, self._t[hi])
            lo >>= 1
            hi >>= 1
        return best


class _StabTree:
    """Live spans sorted by first partition with a max-tree over last partition."""

    __slots__ = ("starts", "items", "size", "_last")

    def __init__(self, entries: Sequence[Tuple[int, int, Operation]]):
        # entries: (first partition, last partition, op), sorted by first partition
        self.starts = [e[0] for e in entries]
        self.items = [e[2] for e in entries]
        self.size = _capacity(max(1, len(entries)))
        self._last = [-1] * (2 * self.size)
        for i, e in enumerate(entries):
            self._last[self.size + i] = e[1]
        for p in range(self.size - 1, 0, -1):
            self._last[p] = max(self._last[2 * p], self._last[2 * p + 1])

    def kill(self, slot: int) -> None:
        p = slot + self.size
        self._last[p] = -1
        p >>= 1
        while p:
            self._last[p] = max(self._last[2 * p], self._last[2 * p + 1])
            p >>= 1

    def stab(self, part: int) -> List[int]:
        """Slots of live spans containing partition `part`."""
        last, size = self._last, self.size
        limit = bisect_right(self.starts, part)
        found: List[int] = []
        if not limit or last[1] < part:
            return found
        # children are filtered before they are pushed
        stack = [(1, 0, size)]
        pop, push = stack.pop, stack.append
        while stack:
            p, lo, hi = pop()
            if p >= size:
                found.append(p - size)
                continue
            mid = (lo + hi) >> 1
            right = 2 * p + 1
            if mid < limit and last[right] >= part:
                push((right, mid, hi))
            if last[right - 1] >= part:
                push((right - 1, lo, mid))
        return found


# Values with at most this many ops are scanned linearly instead of indexed.
_SMALL_VALUE = 16


class OpIntervalTree:
    """
    Operations indexed by the partitions their windows cover.

    Operations are inserted up front; the index is built on the first
    query and later inserts are refused. Removal is permanent.
    """

    def __init__(self, pi: PartitionIndex):
        self.pi = pi
        self._pending: List[Operation] = []
        self._sealed = False
        self._span: Dict[int, PartitionRange] = {}
        self._live: Dict[int, int] = {}
        self._alive_ops: Dict[int, bool] = {}
        self._global: Optional[_StabTree] = None
        self._global_slot: Dict[int, int] = {}
        self._per_value: Dict[int, _StabTree] = {}
        self._value_slot: Dict[int, int] = {}
        self._small: Dict[int, List[Operation]] = {}

    def insert(self, o: Operation) -> None:
        if self._sealed:
            raise RuntimeError("OpIntervalTree is sealed once queried")
        if o.id in self._alive_ops:
            raise ValueError(f"op {o.id} inserted twice")
        self._pending.append(o)
        self._alive_ops[o.id] = True
        self._live[o.value] = self._live.get(o.value, 0) + 1
        self._span[o.id] = op_span_to_partition_range(self.pi, o)

    def _entries(self, ops: List[Operation]) -> List[Tuple[int, int, Operation]]:
        entries = []
        for o in ops:
            start, stop = self._span[o.id]
            if start < stop:
                entries.append((start, stop - 1, o))
        entries.sort(key=lambda e: (e[0], e[2].id))
        return entries

    def _seal(self) -> None:
        if self._sealed:
            return
        self._sealed = True
        entries = self._entries(self._pending)
        self._global = _StabTree(entries)
        self._global_slot = {e[2].id: i for i, e in enumerate(entries)}
        by_value: Dict[int, List[Operation]] = {}
        for o in self._pending:
            by_value.setdefault(o.value, []).append(o)
        for v, ops in by_value.items():
            if len(ops) <= _SMALL_VALUE:
                self._small[v] = ops
                continue
            value_entries = self._entries(ops)
            self._per_value[v] = _StabTree(value_entries)
            for i, e in enumerate(value_entries):
                self._value_slot[e[2].id] = i
        self._pending = []

    def remove(self, o: Operation) -> None:
        self._seal()
        if not self._alive_ops.get(o.id, False):
            raise KeyError(f"op {o.id} is not in the tree")
        self._alive_ops[o.id] = False
        self._live[o.value] -= 1
        slot = self._global_slot.get(o.id)
        if slot is not None:
            self._global.kill(slot)
        value_tree = self._per_value.get(o.value)
        if value_tree is not None and o.id in self._value_slot:
            value_tree.kill(self._value_slot[o.id])

    def search(self, part: int, value: Optional[int] = None) -> List[Operation]:
        """Live ops whose window contains partition `part`, optionally of one value."""
        self._seal()
        if value is None:
            tree = self._global
            return [tree.items[s] for s in tree.stab(part)]
        if value in self._small:
            hits = []
            for o in self._small[value]:
                start, stop = self._span[o.id]
                if self._alive_ops[o.id] and start <= part < stop:
                    hits.append(o)
            return hits
        tree = self._per_value.get(value)
        if tree is None:
            return []
        return [tree.items[s] for s in tree.stab(part)]

    def contains(self, value: int) -> bool:
        return self._live.get(value, 0) > 0
