"""
Decrease-and-conquer linearizability checking.

A provider repeatedly names a value whose removal keeps the residual
history's linearizability status, or BOTTOM when the residual is not
linearizable. The history is linearizable iff every value gets removed.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Protocol, Sequence, Set, Union

from src import config
from src.model import History

logger = logging.getLogger(__name__)


class Bottom:
    def __repr__(self) -> str:
        return "BOTTOM"


BOTTOM = Bottom()


class Verdict(str, Enum):
    LINEARIZABLE = "linearizable"
    NON_LINEARIZABLE = "non_linearizable"


class Stage(str, Enum):
    VALIDATION = "validation"
    STANDARDIZATION = "standardization"
    CHECKER = "checker"
    ORACLE = "oracle"


class ProviderProtocolError(RuntimeError):
    """A provider named a value that is not part of the residual history."""


class LinPProvider(Protocol):
    def next_value(self) -> Union[int, Bottom]:
        ...

    def notify_removed(self, value: int) -> None:
        ...


@dataclass
class CheckReport:
    verdict: Verdict
    stage: Stage
    removal_order: List[int] = field(default_factory=list)
    elapsed_ns: int = 0
    n_ops: int = 0
    adt: str = ""
    reason: str = ""
    warnings: List[str] = field(default_factory=list)
    witness: Optional[List[int]] = None
    # ops handed to the checker after standardization
    checked_ops: int = 0

    @property
    def linearizable(self) -> bool:
        return self.verdict is Verdict.LINEARIZABLE

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready view of the report."""
        data: Dict[str, Any] = {
            "schema_version": config.JSON_SCHEMA_VERSION,
            "adt": self.adt,
            "n_ops": self.n_ops,
            "verdict": self.verdict.value,
            "stage": self.stage.value,
            "removal_order": list(self.removal_order),
            "elapsed_ns": self.elapsed_ns,
            "warnings": list(self.warnings),
        }
        if self.reason:
            data["reason"] = self.reason
        if self.witness is not None:
            data["witness"] = list(self.witness)
        return data


def check_lin(h: History, provider: LinPProvider) -> CheckReport:
    """
    Remove linearizability-preserving values until none are left.

    Args:
        h: The (standardized) history; only its value set is read
        provider: Provider initialized on the same history

    Returns:
        CheckReport with stage CHECKER; removal_order holds dense value indices
    """
    start = time.perf_counter_ns()
    remaining: Set[int] = set(h.values)
    order: List[int] = []
    while remaining:
        v = provider.next_value()
        if v is BOTTOM:
            logger.debug("no linearizability-preserving value among %d left", len(remaining))
            return CheckReport(
                Verdict.NON_LINEARIZABLE, Stage.CHECKER, order,
                time.perf_counter_ns() - start,
                reason=f"no removable value among {len(remaining)} remaining",
            )
        if v not in remaining:
            raise ProviderProtocolError(f"provider returned value {v!r} outside the residual history")
        remaining.discard(v)
        provider.notify_removed(v)
        order.append(v)
    return CheckReport(Verdict.LINEARIZABLE, Stage.CHECKER, order, time.perf_counter_ns() - start)


def direct_report(linearizable: bool, order: Sequence[int], elapsed_ns: int, reason: str = "") -> CheckReport:
    """Report for checkers that decide without the provider loop."""
    verdict = Verdict.LINEARIZABLE if linearizable else Verdict.NON_LINEARIZABLE
    return CheckReport(verdict, Stage.CHECKER, list(order) if linearizable else [], elapsed_ns, reason=reason)


class ResidualProvider:
    """Provider that re-derives its answer from the residual history on every call.

    Used for the register checker and the unoptimized reference checkers.
    """

    def __init__(self, h: History, get_linp: Callable[[History], Union[int, Bottom]]):
        self.residual = h
        self._get_linp = get_linp

    def next_value(self) -> Union[int, Bottom]:
        return self._get_linp(self.residual)

    def notify_removed(self, value: int) -> None:
        self.residual = self.residual.with_ops(o for o in self.residual.ops if o.value != value)
