"""
Tests for the monitor front door, the removal loop and configuration.
"""
import unittest
from unittest.mock import patch

from support import load_fixture, make_history

from src import config
from src.framework import (
    BOTTOM, CheckReport, ProviderProtocolError, Stage, Verdict, check_lin, direct_report,
)
from src.model import AdtKind, HistoryValidationError, parse_history
from src.monitor import Monitor, OracleBudgetExceeded
from src.oracle import OracleBudget, replay_witness


class ScriptedProvider:
    """Provider returning a fixed sequence of answers."""

    def __init__(self, answers):
        self.answers = list(answers)
        self.removed = []

    def next_value(self):
        return self.answers.pop(0)

    def notify_removed(self, value):
        self.removed.append(value)


class TestCheckLin(unittest.TestCase):
    """Test cases for the decrease-and-conquer loop."""

    def setUp(self):
        self.h = load_fixture("stack_potbot")

    def test_removes_every_value(self):
        provider = ScriptedProvider([2, 1, 3])
        report = check_lin(self.h, provider)
        self.assertTrue(report.linearizable)
        self.assertEqual(report.removal_order, [2, 1, 3])
        self.assertEqual(provider.removed, [2, 1, 3])

    def test_bottom_stops_the_loop(self):
        report = check_lin(self.h, ScriptedProvider([1, BOTTOM]))
        self.assertEqual(report.verdict, Verdict.NON_LINEARIZABLE)
        self.assertEqual(report.removal_order, [1])
        self.assertIn("2 remaining", report.reason)

    def test_foreign_value_is_a_protocol_error(self):
        with self.assertRaises(ProviderProtocolError):
            check_lin(self.h, ScriptedProvider([1, 1]))

    def test_empty_history_is_linearizable(self):
        report = check_lin(make_history(AdtKind.STACK, []), ScriptedProvider([]))
        self.assertTrue(report.linearizable)

    def test_direct_report_drops_order_on_failure(self):
        report = direct_report(False, [1, 2], 5, reason="nope")
        self.assertEqual(report.removal_order, [])
        self.assertEqual(report.stage, Stage.CHECKER)


class TestMonitor(unittest.TestCase):
    """Test cases for Monitor.check."""

    def test_verdicts_for_fixtures(self):
        expected = {
            "h_queue": True,
            "register_h2": False,
            "stack_potbot": True,
            "queue_potfront": True,
            "queue_minimal_enq": True,
            "pq_potlow": True,
            "pq_potlow_blocked": False,
            "set_stale_delete": False,
        }
        for engine in ("fast", "naive", "oracle"):
            monitor = Monitor(engine)
            for name, verdict in expected.items():
                with self.subTest(engine=engine, name=name):
                    self.assertEqual(monitor.check(load_fixture(name)).linearizable, verdict)

    def test_report_fields(self):
        report = Monitor().check(load_fixture("h_queue"))
        self.assertEqual(report.removal_order, [3])
        self.assertEqual(report.n_ops, 2)
        self.assertEqual(report.adt, "queue")
        self.assertEqual(report.stage, Stage.CHECKER)
        self.assertGreaterEqual(report.elapsed_ns, 0)
        data = report.to_dict()
        self.assertEqual(data["schema_version"], config.JSON_SCHEMA_VERSION)
        self.assertEqual(data["verdict"], "linearizable")
        self.assertNotIn("witness", data)

    def test_checked_ops_count_synthetic_removes(self):
        report = Monitor().check(load_fixture("queue_minimal_enq"))
        self.assertEqual(report.n_ops, 4)
        self.assertEqual(report.checked_ops, 8)

    def test_standardization_stage(self):
        h = make_history(AdtKind.QUEUE, [(1, "a", "enq", 1, 5, 6), (2, "b", "deq", 1, 1, 2)])
        report = Monitor().check(h)
        self.assertEqual(report.verdict, Verdict.NON_LINEARIZABLE)
        self.assertEqual(report.stage, Stage.STANDARDIZATION)
        self.assertTrue(report.reason)

    def test_oracle_witness(self):
        h = load_fixture("stack_potbot")
        report = Monitor("oracle").check(h)
        self.assertEqual(report.stage, Stage.ORACLE)
        self.assertTrue(replay_witness(h, report.witness))
        self.assertEqual(sorted(report.removal_order), [1, 2, 3])

    def test_oracle_budget(self):
        monitor = Monitor("oracle", OracleBudget(max_ops=2))
        with self.assertRaises(OracleBudgetExceeded):
            monitor.check(load_fixture("stack_potbot"))

    def test_ill_formed_input(self):
        h = make_history(AdtKind.STACK, [(1, "p", "push", 1, 1, 4), (2, "p", "pop", 1, 3, 6)])
        with self.assertRaises(HistoryValidationError) as ctx:
            Monitor().check(h)
        self.assertEqual(len(ctx.exception.violations), 1)

    def test_ambiguous_input(self):
        h = make_history(AdtKind.QUEUE, [(1, "a", "enq", 4, 1, 2), (2, "b", "enq", 4, 3, 4)])
        with self.assertRaises(HistoryValidationError) as ctx:
            Monitor().check(h)
        self.assertEqual(ctx.exception.ambiguous, [4])

    def test_parse_warnings_reach_the_report(self):
        h = parse_history("adt queue\ninv p1 enq 1\nres p1\ninv p2 deq 1\n", "events")
        report = Monitor().check(h)
        self.assertTrue(report.linearizable)
        self.assertEqual(len(report.warnings), 1)

    def test_unknown_engine(self):
        with self.assertRaises(ValueError):
            Monitor("quantum")

    def test_report_is_dataclass(self):
        self.assertIsInstance(Monitor().check(load_fixture("pq_potlow")), CheckReport)


class TestConfig(unittest.TestCase):
    """Test cases for configuration validation."""

    def test_defaults_are_valid(self):
        self.assertTrue(config.validate_config())

    @patch("src.config.LOG_LEVEL", "CHATTY")
    def test_unknown_log_level(self):
        with self.assertRaises(ValueError):
            config.validate_config()

    @patch("src.config.BENCH_REPS", 0)
    def test_non_positive_reps(self):
        with self.assertRaises(ValueError):
            config.validate_config()


if __name__ == "__main__":
    unittest.main(verbosity=2)
