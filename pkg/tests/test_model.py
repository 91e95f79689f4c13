"""
Tests for history parsing, serialization and validation.
"""
import unittest

from hypothesis import given, settings, strategies as st

from support import generated_histories, load_fixture, make_history

from src.model import (
    EMPTY, AdtKind, History, HistoryParseError, Method, parse_history, project,
    serialize_history, validate_unambiguous, validate_well_formed,
)


class TestParseOps(unittest.TestCase):
    """Test cases for the ops format."""

    def test_parse_fixture(self):
        """Header and ops are read as written."""
        h = load_fixture("h_queue")
        self.assertEqual(h.adt, AdtKind.QUEUE)
        self.assertEqual(len(h), 2)
        enq, deq = h.ops
        self.assertEqual((enq.method, enq.inv, enq.res), (Method.ENQ, 1, 3))
        self.assertEqual((deq.method, deq.proc), (Method.DEQ, "p2"))
        self.assertEqual(h.original_value(enq.value), 3)

    def test_dense_values_follow_original_order(self):
        h = parse_history("adt stack\nop 1 a push 10 1 2\nop 2 b push 3 3 4\n")
        by_original = {h.original_value(o.value): o.value for o in h.ops}
        self.assertEqual(by_original, {3: 1, 10: 2})

    def test_priority_queue_spellings(self):
        h = parse_history("adt priority-queue\nop 1 p enq 1 1 2\n")
        self.assertEqual(h.adt, AdtKind.PRIORITY_QUEUE)

    def test_adt_argument_without_header(self):
        h = parse_history("op 1 p push 1 1 2\n", adt=AdtKind.STACK)
        self.assertEqual(h.adt, AdtKind.STACK)

    def test_missing_adt(self):
        with self.assertRaises(HistoryParseError):
            parse_history("op 1 p push 1 1 2\n")

    def test_conflicting_adt(self):
        with self.assertRaises(HistoryParseError):
            parse_history("adt stack\nop 1 p push 1 1 2\n", adt=AdtKind.QUEUE)

    def test_header_after_ops(self):
        with self.assertRaises(HistoryParseError) as ctx:
            parse_history("op 1 p push 1 1 2\nadt stack\n", adt=AdtKind.STACK)
        self.assertEqual(ctx.exception.line, 2)

    def test_duplicate_id(self):
        with self.assertRaises(HistoryParseError) as ctx:
            parse_history("adt stack\nop 1 p push 1 1 2\nop 1 q push 2 3 4\n")
        self.assertEqual(ctx.exception.line, 3)

    def test_unknown_method_for_adt(self):
        with self.assertRaises(HistoryParseError):
            parse_history("adt set\nop 1 p push 1 1 2\n")

    def test_set_has_no_empty(self):
        with self.assertRaises(HistoryParseError):
            parse_history("adt set\nop 1 p empty - 1 2\n")

    def test_dash_only_with_empty(self):
        with self.assertRaises(HistoryParseError):
            parse_history("adt stack\nop 1 p pop - 1 2\n")
        with self.assertRaises(HistoryParseError):
            parse_history("adt stack\nop 1 p empty 4 1 2\n")

    def test_non_positive_value(self):
        with self.assertRaises(HistoryParseError):
            parse_history("adt stack\nop 1 p push 0 1 2\n")

    def test_out_of_range_time(self):
        with self.assertRaises(HistoryParseError):
            parse_history(f"adt stack\nop 1 p push 1 1 {2 ** 63}\n")

    def test_comments_and_blank_lines(self):
        h = parse_history("# a comment\n\nadt queue\n\n# another\nop 1 p enq 1 1 2\n")
        self.assertEqual(len(h), 1)

    def test_bytes_input(self):
        h = parse_history(b"adt register\nop 1 p write 5 1 2\n")
        self.assertEqual(h.adt, AdtKind.REGISTER)


class TestParseEvents(unittest.TestCase):
    """Test cases for the events format."""

    def test_ticks_are_line_ordinals(self):
        h = load_fixture("stack_events", fmt="events")
        spans = {(o.method, h.original_value(o.value)): (o.inv, o.res) for o in h.ops}
        self.assertEqual(spans[(Method.PUSH, 1)], (1, 3))
        self.assertEqual(spans[(Method.PUSH, 2)], (2, 4))
        self.assertEqual(spans[(Method.POP, 2)], (5, 6))
        self.assertEqual(spans[(Method.EMPTY, None)], (9, 10))

    def test_unclosed_invocation_is_dropped_with_warning(self):
        text = "adt queue\ninv p1 enq 1\nres p1\ninv p2 deq 1\n"
        with self.assertLogs("src.model", level="WARNING"):
            h = parse_history(text, "events")
        self.assertEqual(len(h), 1)
        self.assertEqual(len(h.warnings), 1)
        self.assertIn("p2", h.warnings[0])

    def test_second_invocation_while_pending(self):
        with self.assertRaises(HistoryParseError) as ctx:
            parse_history("adt queue\ninv p1 enq 1\ninv p1 enq 2\n", "events")
        self.assertEqual(ctx.exception.line, 3)

    def test_response_without_invocation(self):
        with self.assertRaises(HistoryParseError):
            parse_history("adt queue\nres p1\n", "events")


class TestSerialize(unittest.TestCase):
    """Test cases for serialization."""

    def test_ops_output_is_stable(self):
        text = "adt queue\nop 1 p1 enq 3 1 3\nop 2 p2 deq 3 2 4\n"
        self.assertEqual(serialize_history(parse_history(text)), text)

    @settings(max_examples=500, deadline=None)
    @given(st.sampled_from(list(AdtKind)).flatmap(
        lambda adt: generated_histories(adt, max_ops=60, max_values=60, mutated=False)))
    def test_ops_round_trip_on_generated_histories(self, h):
        text = serialize_history(h)
        again = parse_history(text)
        self.assertEqual(serialize_history(again), text)
        self.assertEqual(again.adt, h.adt)
        self.assertEqual(len(again), len(h))

    def test_events_output_parses_back(self):
        h = load_fixture("stack_events", fmt="events")
        again = parse_history(serialize_history(h, "events"), "events")
        self.assertEqual(again, h)

    def test_events_refuse_shared_times(self):
        h = make_history(AdtKind.QUEUE, [(1, "a", "enq", 1, 1, 3), (2, "b", "deq", 1, 3, 4)])
        with self.assertRaises(ValueError):
            serialize_history(h, "events")


class TestValidation(unittest.TestCase):
    """Test cases for well-formedness and unambiguity."""

    def test_fixtures_are_valid(self):
        for name in ("h_queue", "register_h2", "stack_potbot", "queue_potfront",
                     "queue_minimal_enq", "pq_potlow", "set_stale_delete"):
            h = load_fixture(name)
            self.assertEqual(validate_well_formed(h), [], name)
            self.assertEqual(validate_unambiguous(h), [], name)

    def test_same_process_overlap(self):
        h = make_history(AdtKind.STACK, [(1, "p", "push", 1, 1, 4), (2, "p", "pop", 1, 3, 6)])
        violations = validate_well_formed(h)
        self.assertEqual(len(violations), 1)
        self.assertIn("overlap", violations[0])

    def test_same_process_touching_is_overlap(self):
        h = make_history(AdtKind.STACK, [(1, "p", "push", 1, 1, 3), (2, "p", "pop", 1, 3, 6)])
        self.assertEqual(len(validate_well_formed(h)), 1)

    def test_response_not_after_invocation(self):
        h = make_history(AdtKind.STACK, [(1, "p", "push", 1, 5, 5)])
        self.assertEqual(len(validate_well_formed(h)), 1)

    def test_ambiguous_values_reported_by_original_id(self):
        h = make_history(AdtKind.QUEUE, [
            (1, "a", "enq", 7, 1, 2),
            (2, "b", "enq", 7, 3, 4),
            (3, "c", "deq", 9, 5, 6),
            (4, "d", "enq", 2, 1, 2),
        ])
        self.assertEqual(validate_unambiguous(h), [7, 9])

    def test_two_removes_are_ambiguous(self):
        h = make_history(AdtKind.SET, [
            (1, "a", "insert_ok", 1, 1, 2),
            (2, "b", "delete_ok", 1, 3, 4),
            (3, "c", "delete_ok", 1, 5, 6),
        ])
        self.assertEqual(validate_unambiguous(h), [1])

    def test_register_without_write_is_ambiguous(self):
        h = make_history(AdtKind.REGISTER, [(1, "a", "read", 4, 1, 2)])
        self.assertEqual(validate_unambiguous(h), [4])


class TestProjection(unittest.TestCase):
    """Test cases for subhistory selection."""

    def test_project_by_value_and_method(self):
        h = load_fixture("stack_potbot")
        one = next(o.value for o in h.ops if h.original_value(o.value) == 1)
        self.assertEqual(len(project(h, value=one)), 3)
        self.assertEqual(len(project(h, methods=[Method.POP])), 3)
        self.assertEqual(len(project(h, value=one, methods=[Method.POP])), 1)
        self.assertEqual(len(project(h, proc="p3")), 2)

    def test_projection_keeps_numbering(self):
        h = load_fixture("stack_potbot")
        sub = project(h, proc="p2")
        self.assertEqual(sub.value_ids, h.value_ids)

    def test_empty_ops_group_under_sentinel(self):
        h = load_fixture("stack_events", fmt="events")
        self.assertIn(EMPTY, h.by_value())
        self.assertNotIn(EMPTY, h.values)
        self.assertIsInstance(h, History)


if __name__ == "__main__":
    unittest.main(verbosity=2)
