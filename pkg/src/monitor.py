"""
Linearizability Monitor
Runs one history through validation, standardization and the checker.
"""
from __future__ import annotations

import logging
import time
from typing import Callable, Dict, Optional

from src.checker_pqueue import check_pqueue, check_pqueue_naive
from src.checker_queue import check_queue, check_queue_naive
from src.checker_register import check_register
from src.checker_set import check_set, check_set_naive
from src.checker_stack import check_stack, check_stack_naive
from src.framework import CheckReport, Stage, Verdict
from src.model import (
    EMPTY, AdtKind, History, HistoryValidationError, validate_unambiguous, validate_well_formed,
)
from src.oracle import BUDGET_EXCEEDED, OracleBudget, find_linearization
from src.standardize import NonLinearizable, StandardizedHistory, standardize

logger = logging.getLogger(__name__)

ENGINES = ("fast", "naive", "oracle")

_FAST: Dict[AdtKind, Callable[[StandardizedHistory], CheckReport]] = {
    AdtKind.SET: check_set,
    AdtKind.STACK: check_stack,
    AdtKind.QUEUE: check_queue,
    AdtKind.PRIORITY_QUEUE: check_pqueue,
}

_NAIVE: Dict[AdtKind, Callable[[StandardizedHistory], CheckReport]] = {
    AdtKind.SET: check_set_naive,
    AdtKind.STACK: check_stack_naive,
    AdtKind.QUEUE: check_queue_naive,
    AdtKind.PRIORITY_QUEUE: check_pqueue_naive,
}


class OracleBudgetExceeded(RuntimeError):
    """The brute-force search ran out of its operation or state budget."""


class Monitor:
    """Checks histories with one of the available engines."""

    def __init__(self, engine: str = "fast", budget: Optional[OracleBudget] = None):
        """
        Args:
            engine: "fast" (log-linear checkers), "naive" (reference
                providers) or "oracle" (brute force, small histories)
            budget: Limits for the oracle engine
        """
        if engine not in ENGINES:
            raise ValueError(f"unknown engine '{engine}'; expected one of {ENGINES}")
        self.engine = engine
        self.budget = budget or OracleBudget()

    @staticmethod
    def validate(h: History) -> None:
        """Raise HistoryValidationError unless `h` is well-formed and unambiguous."""
        violations = validate_well_formed(h)
        if violations:
            raise HistoryValidationError(violations)
        ambiguous = validate_unambiguous(h)
        if ambiguous:
            raise HistoryValidationError(ambiguous=ambiguous)

    def check(self, h: History) -> CheckReport:
        """
        Decide whether `h` is linearizable.

        Returns:
            CheckReport; removal_order uses the history's original value ids

        Raises:
            HistoryValidationError: ill-formed or ambiguous input
            OracleBudgetExceeded: the oracle engine gave up
        """
        self.validate(h)
        start = time.perf_counter_ns()
        if self.engine == "oracle":
            report = self._check_oracle(h)
        elif h.adt is AdtKind.REGISTER:
            report = check_register(h)
        else:
            std = standardize(h)
            if isinstance(std, NonLinearizable):
                report = CheckReport(Verdict.NON_LINEARIZABLE, Stage.STANDARDIZATION, reason=std.reason)
            else:
                checkers = _FAST if self.engine == "fast" else _NAIVE
                report = checkers[h.adt](std)
                report.checked_ops = len(std.history)
        report.elapsed_ns = time.perf_counter_ns() - start
        report.removal_order = [h.original_value(v) for v in report.removal_order]
        report.n_ops = len(h)
        report.checked_ops = report.checked_ops or len(h)
        report.adt = h.adt.value
        report.warnings = list(h.warnings) + report.warnings
        logger.debug("%s check of %d ops: %s at %s", self.engine, len(h), report.verdict.value, report.stage.value)
        return report

    def _check_oracle(self, h: History) -> CheckReport:
        found = find_linearization(h, self.budget)
        if found is BUDGET_EXCEEDED:
            raise OracleBudgetExceeded(
                f"oracle budget exceeded ({len(h)} ops, max {self.budget.max_ops} ops / "
                f"{self.budget.max_states} states)"
            )
        if found is None:
            return CheckReport(Verdict.NON_LINEARIZABLE, Stage.ORACLE, reason="no legal linearization")
        by_id = {o.id: o for o in h.ops}
        order = []
        for op_id in found:
            v = by_id[op_id].value
            if v != EMPTY and v not in order:
                order.append(v)
        return CheckReport(Verdict.LINEARIZABLE, Stage.ORACLE, order, witness=list(found))
