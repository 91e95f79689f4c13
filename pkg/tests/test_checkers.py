"""
Tests for the per-ADT checkers: worked examples, provider behaviour, and
agreement between the optimized and the reference implementations.
"""
import unittest

from hypothesis import given, settings

from support import load_fixture, make_history, small_histories

from src.checker_pqueue import check_pqueue, check_pqueue_naive, is_potential_min
from src.checker_queue import (
    QueueProvider, check_queue, check_queue_naive, front_enq, is_potentially_front,
)
from src.checker_register import (
    ValueClass, check_register, get_linp_register, is_preserving, summarize,
)
from src.checker_set import check_set, check_set_naive, is_safe_value
from src.checker_stack import (
    StackProvider, check_stack, check_stack_naive, init_stack_checker, is_potentially_bottom,
)
from src.framework import BOTTOM, Stage, Verdict
from src.model import AdtKind
from src.oracle import is_linearizable_bruteforce
from src.standardize import NonLinearizable, StandardizedHistory, build_value_index, standardize


def residual_without(h, value):
    return h.with_ops(o for o in h.ops if o.value != value)


class TestRegisterChecker(unittest.TestCase):

    def test_stale_reads(self):
        report = check_register(load_fixture("register_h2"))
        self.assertEqual(report.verdict, Verdict.NON_LINEARIZABLE)
        self.assertEqual(report.stage, Stage.CHECKER)
        self.assertEqual(report.removal_order, [])

    def test_classification(self):
        summaries = summarize(load_fixture("register_h2").ops)
        self.assertEqual(summaries[1].cls, ValueClass.FORWARD)
        self.assertEqual(summaries[1].interval, (2, 5))
        self.assertFalse(is_preserving(summaries, 1))
        self.assertFalse(is_preserving(summaries, 2))

    def test_sequential_history(self):
        h = make_history(AdtKind.REGISTER, [
            (1, "a", "write", 1, 1, 2),
            (2, "b", "read", 1, 3, 4),
            (3, "a", "write", 2, 5, 6),
            (4, "b", "read", 2, 7, 8),
        ])
        report = check_register(h)
        self.assertTrue(report.linearizable)
        self.assertEqual(sorted(report.removal_order), [1, 2])

    def test_read_before_write(self):
        h = make_history(AdtKind.REGISTER, [(1, "a", "read", 1, 1, 2), (2, "b", "write", 1, 3, 4)])
        self.assertIs(get_linp_register(h), BOTTOM)

    def test_tied_extremes_act_forward(self):
        # each value is pinned at instant 14, so the two cannot both hold it
        h = make_history(AdtKind.REGISTER, [
            (1, "a", "write", 1, 8, 14),
            (2, "b", "read", 1, 14, 15),
            (3, "c", "write", 2, 8, 14),
            (4, "d", "read", 2, 14, 15),
        ])
        summaries = summarize(h.ops)
        self.assertEqual(summaries[1].cls, ValueClass.FORWARD)
        self.assertEqual(summaries[1].interval, (14, 14))
        self.assertIs(get_linp_register(h), BOTTOM)
        self.assertFalse(check_register(h).linearizable)
        self.assertFalse(is_linearizable_bruteforce(h))

    def test_single_tied_value(self):
        h = make_history(AdtKind.REGISTER, [
            (1, "a", "write", 1, 1, 3),
            (2, "b", "read", 1, 3, 4),
        ])
        self.assertEqual(summarize(h.ops)[1].cls, ValueClass.FORWARD)
        self.assertTrue(check_register(h).linearizable)

    def test_refuses_other_adts(self):
        with self.assertRaises(ValueError):
            check_register(load_fixture("h_queue"))


class TestSetChecker(unittest.TestCase):

    def test_stale_delete_fail(self):
        sh = standardize(load_fixture("set_stale_delete"))
        self.assertFalse(is_safe_value(sh, 1))
        self.assertEqual(check_set(sh).verdict, Verdict.NON_LINEARIZABLE)
        self.assertEqual(check_set_naive(sh).verdict, Verdict.NON_LINEARIZABLE)

    def test_delete_fail_overlapping_insert(self):
        h = make_history(AdtKind.SET, [
            (1, "a", "insert_ok", 1, 1, 4),
            (2, "b", "delete_fail", 1, 3, 5),
            (3, "a", "delete_ok", 1, 6, 7),
        ])
        report = check_set(standardize(h))
        self.assertTrue(report.linearizable)
        self.assertEqual(report.removal_order, [1])

    def test_delete_fail_starting_when_insert_responds(self):
        h = make_history(AdtKind.SET, [
            (1, "a", "insert_ok", 1, 1, 2),
            (2, "b", "delete_fail", 1, 2, 5),
        ])
        sh = standardize(h)
        self.assertFalse(is_safe_value(sh, 1))
        self.assertFalse(check_set(sh).linearizable)
        self.assertFalse(check_set_naive(sh).linearizable)
        self.assertFalse(is_linearizable_bruteforce(h))

    def test_delete_fail_ending_when_delete_starts(self):
        h = make_history(AdtKind.SET, [
            (1, "a", "insert_ok", 1, 1, 2),
            (2, "b", "delete_fail", 1, 3, 6),
            (3, "a", "delete_ok", 1, 6, 8),
        ])
        self.assertFalse(check_set(standardize(h)).linearizable)
        self.assertFalse(is_linearizable_bruteforce(h))


class TestStackChecker(unittest.TestCase):

    def test_potentially_bottom(self):
        h = load_fixture("stack_potbot")
        self.assertTrue(is_potentially_bottom(h, 1))
        self.assertFalse(is_potentially_bottom(h, 2))

    def test_provider_emits_bottom_value_first(self):
        sh = standardize(load_fixture("stack_potbot"))
        provider = init_stack_checker(sh)
        self.assertIsInstance(provider, StackProvider)
        self.assertEqual(provider.next_value(), 1)

    def test_init_refuses_other_adts(self):
        with self.assertRaises(ValueError):
            init_stack_checker(standardize(load_fixture("h_queue")))

    def test_fixture_verdict(self):
        sh = standardize(load_fixture("stack_potbot"))
        report = check_stack(sh)
        self.assertTrue(report.linearizable)
        self.assertEqual(report.removal_order[0], 1)
        self.assertEqual(sorted(report.removal_order), [1, 2, 3])
        self.assertTrue(check_stack_naive(sh).linearizable)

    def test_lifo_violation(self):
        h = make_history(AdtKind.STACK, [
            (1, "a", "push", 1, 1, 2),
            (2, "a", "push", 2, 3, 4),
            (3, "a", "pop", 1, 5, 6),
            (4, "a", "pop", 2, 7, 8),
        ])
        sh = standardize(h)
        self.assertEqual(check_stack(sh).verdict, Verdict.NON_LINEARIZABLE)
        self.assertEqual(check_stack_naive(sh).verdict, Verdict.NON_LINEARIZABLE)


class TestQueueChecker(unittest.TestCase):

    def test_potentially_front(self):
        h = load_fixture("queue_potfront")
        self.assertTrue(is_potentially_front(h, 1))
        self.assertFalse(is_potentially_front(h, 2))

    def test_front_enq_order(self):
        sh = standardize(load_fixture("queue_minimal_enq"))
        provider = QueueProvider(sh)
        self.assertEqual(provider.next_front_enq(), 2)
        self.assertEqual(provider.next_front_enq(), 3)
        self.assertEqual(provider.next_front_enq(), 1)
        self.assertIsNone(provider.next_front_enq())
        provider.notify_removed(1)
        self.assertIsNone(provider.next_front_enq())
        provider.notify_removed(2)
        self.assertEqual(provider.next_front_enq(), 4)

    def test_front_enq_reference(self):
        h = load_fixture("queue_minimal_enq")
        self.assertEqual([v for v in (1, 2, 3, 4) if front_enq(h, v)], [1, 2, 3])
        residual = residual_without(residual_without(h, 1), 2)
        self.assertTrue(front_enq(residual, 4))

    def test_fixtures(self):
        for name in ("h_queue", "queue_potfront", "queue_minimal_enq"):
            with self.subTest(name=name):
                sh = standardize(load_fixture(name))
                self.assertTrue(check_queue(sh).linearizable)
                self.assertTrue(check_queue_naive(sh).linearizable)

    def test_fifo_violation(self):
        h = make_history(AdtKind.QUEUE, [
            (1, "a", "enq", 1, 1, 2),
            (2, "a", "enq", 2, 3, 4),
            (3, "a", "deq", 2, 5, 6),
            (4, "a", "deq", 1, 7, 8),
        ])
        sh = standardize(h)
        self.assertFalse(check_queue(sh).linearizable)
        self.assertFalse(check_queue_naive(sh).linearizable)

    def test_removing_unknown_value(self):
        provider = QueueProvider(standardize(load_fixture("h_queue")))
        with self.assertRaises(ValueError):
            provider.notify_removed(5)


class TestPriorityQueueChecker(unittest.TestCase):

    def test_potential_minimum(self):
        self.assertTrue(is_potential_min(load_fixture("pq_potlow"), 1))
        self.assertFalse(is_potential_min(load_fixture("pq_potlow_blocked"), 1))

    def test_fixtures(self):
        sh = standardize(load_fixture("pq_potlow"))
        report = check_pqueue(sh)
        self.assertTrue(report.linearizable)
        self.assertEqual(report.removal_order, [1, 2, 3])
        self.assertTrue(check_pqueue_naive(sh).linearizable)

        blocked = standardize(load_fixture("pq_potlow_blocked"))
        self.assertFalse(check_pqueue(blocked).linearizable)
        self.assertFalse(check_pqueue_naive(blocked).linearizable)


class TestOptimizedAgainstReference(unittest.TestCase):
    """Randomized agreement between optimized providers and their definitions."""

    def _standardized(self, h):
        sh = standardize(h)
        return None if isinstance(sh, NonLinearizable) else sh

    @settings(max_examples=2000, deadline=None)
    @given(small_histories(AdtKind.STACK, max_ops=12))
    def test_stack_emissions_are_potentially_bottom(self, h):
        sh = self._standardized(h)
        if sh is None:
            return
        provider = StackProvider(sh)
        residual = sh.history
        while residual.values:
            v = provider.next_value()
            if v is BOTTOM:
                break
            self.assertTrue(is_potentially_bottom(residual, v))
            provider.notify_removed(v)
            residual = residual_without(residual, v)
        self.assertEqual(check_stack(sh).verdict, check_stack_naive(sh).verdict)

    @settings(max_examples=2000, deadline=None)
    @given(small_histories(AdtKind.QUEUE, max_ops=12))
    def test_queue_emissions_are_potentially_front(self, h):
        sh = self._standardized(h)
        if sh is None:
            return
        provider = QueueProvider(sh)
        residual = sh.history
        while residual.values:
            v = provider.next_value()
            if v is BOTTOM:
                break
            self.assertTrue(is_potentially_front(residual, v))
            provider.notify_removed(v)
            residual = residual_without(residual, v)
        self.assertEqual(check_queue(sh).verdict, check_queue_naive(sh).verdict)

    @settings(max_examples=2000, deadline=None)
    @given(small_histories(AdtKind.PRIORITY_QUEUE, max_ops=12))
    def test_pqueue_agrees(self, h):
        sh = self._standardized(h)
        if sh is None:
            return
        self.assertEqual(check_pqueue(sh).verdict, check_pqueue_naive(sh).verdict)

    @settings(max_examples=1000, deadline=None)
    @given(small_histories(AdtKind.SET, max_ops=12))
    def test_set_agrees(self, h):
        sh = self._standardized(h)
        if sh is None:
            return
        self.assertEqual(check_set(sh).verdict, check_set_naive(sh).verdict)

    @settings(max_examples=1000, deadline=None)
    @given(small_histories(AdtKind.SET, max_ops=12))
    def test_set_safety_survives_removing_other_values(self, h):
        sh = self._standardized(h)
        if sh is None:
            return
        for gone in sh.value_index:
            residual = residual_without(sh.history, gone)
            rest = StandardizedHistory(residual, build_value_index(residual), sh.synthetic_ops)
            for v in rest.value_index:
                self.assertEqual(is_safe_value(rest, v), is_safe_value(sh, v), (gone, v))


if __name__ == "__main__":
    unittest.main(verbosity=2)
