"""Trace records, parsing, serialization, and conformance validation."""

import logging

import pytest
from hypothesis import given, strategies as st

from tracelens.events import (
    Event,
    EventTrace,
    TraceFormat,
    TraceParseError,
    ViolationKind,
    parse_trace,
    serialize_trace,
)
from tracelens.model import validate_against_model
from tracelens import fixtures

identifiers = st.text(
    st.characters(blacklist_characters="\t\n\r", blacklist_categories=("Cs",)),
    min_size=1,
    max_size=8,
)


@st.composite
def traces(draw):
    rows = draw(st.lists(st.tuples(identifiers, identifiers, identifiers,
                                   identifiers, identifiers), max_size=20))
    return EventTrace(
        Event(index, *fields) for index, fields in enumerate(rows, start=1)
    )


class TestEvent:
    def test_fields(self):
        event = Event(1, "P3", "Start", "P1", "Unav.", "Running")
        assert event.process == "P3"
        assert event.changes_state

    def test_rejects_bad_index(self):
        with pytest.raises(ValueError, match="index"):
            Event(0, "P1", "Read", "FileA", "Open", "Open")

    def test_rejects_empty_field(self):
        with pytest.raises(ValueError, match="empty operation"):
            Event(1, "P1", "", "FileA", "Open", "Open")

    def test_rejects_structural_characters(self):
        with pytest.raises(ValueError, match="tab or newline"):
            Event(1, "P1", "Re\tad", "FileA", "Open", "Open")

    def test_source_no_ignored_by_equality(self):
        plain = Event(1, "P1", "Read", "FileA", "Open", "Open")
        renumbered = Event(1, "P1", "Read", "FileA", "Open", "Open", source_no=9)
        assert plain == renumbered


class TestEventTrace:
    def test_rejects_non_dense_indices(self):
        events = [Event(1, "P1", "Read", "FileA", "Open", "Open"),
                  Event(3, "P1", "Read", "FileA", "Open", "Open")]
        with pytest.raises(ValueError, match="dense"):
            EventTrace(events)

    def test_event_lookup_is_one_based(self, sample_trace):
        assert sample_trace.event(1).process == "P3"
        assert sample_trace.event(37).operation == "Signal"
        with pytest.raises(IndexError):
            sample_trace.event(0)
        with pytest.raises(IndexError):
            sample_trace.event(38)

    def test_immutable(self, sample_trace):
        with pytest.raises(AttributeError):
            sample_trace.events = ()


class TestParseTsv:
    def test_sample_trace_shape(self, sample_trace):
        assert len(sample_trace) == 37
        first = sample_trace.event(1)
        assert (first.process, first.operation, first.resource,
                first.old_state, first.new_state) == \
            ("P3", "Start", "P1", "Unav.", "Running")
        last = sample_trace.event(37)
        assert (last.process, last.operation, last.resource,
                last.old_state, last.new_state) == \
            ("P1", "Signal", "P1", "Blocked", "Running")

    def test_empty_input(self):
        with pytest.raises(TraceParseError, match="no events"):
            parse_trace("", TraceFormat.TSV)
        with pytest.raises(TraceParseError, match="no events"):
            parse_trace("   \n  \n", TraceFormat.TSV)

    def test_header_only_is_empty_trace(self):
        trace = parse_trace("no\tprocess\toperation\tresource\told_state\tnew_state\n")
        assert len(trace) == 0

    def test_bad_header(self):
        with pytest.raises(TraceParseError, match="line 1"):
            parse_trace("nope\nstuff\n")

    def test_wrong_column_count_names_line(self):
        text = fixtures.sample_trace_text().splitlines()
        text[11] = text[11].rsplit("\t", 1)[0]  # physical line 12 loses a field
        with pytest.raises(TraceParseError, match="line 12"):
            parse_trace("\n".join(text) + "\n")

    def test_duplicate_number(self):
        text = ("no\tprocess\toperation\tresource\told_state\tnew_state\n"
                "1\tP1\tRead\tFileA\tOpen\tOpen\n"
                "1\tP1\tRead\tFileB\tOpen\tOpen\n")
        with pytest.raises(TraceParseError, match="duplicate event number 1"):
            parse_trace(text)

    def test_empty_field(self):
        text = ("no\tprocess\toperation\tresource\told_state\tnew_state\n"
                "1\tP1\t\tFileA\tOpen\tOpen\n")
        with pytest.raises(TraceParseError, match="line 2: empty operation"):
            parse_trace(text)

    def test_non_integer_number(self):
        text = ("no\tprocess\toperation\tresource\told_state\tnew_state\n"
                "x\tP1\tRead\tFileA\tOpen\tOpen\n")
        with pytest.raises(TraceParseError, match="not an integer"):
            parse_trace(text)

    def test_gappy_numbering_renumbers_densely(self, caplog):
        text = ("no\tprocess\toperation\tresource\told_state\tnew_state\n"
                "1\tP1\tRead\tFileA\tOpen\tOpen\n"
                "4\tP1\tRead\tFileB\tOpen\tOpen\n"
                "9\tP2\tRead\tFileA\tOpen\tOpen\n")
        with caplog.at_level(logging.WARNING, logger="tracelens"):
            trace = parse_trace(text)
        assert [e.index for e in trace] == [1, 2, 3]
        assert [e.source_no for e in trace] == [1, 4, 9]
        assert any("renumbering" in record.message for record in caplog.records)


class TestParseJson:
    def test_round_trip_of_sample(self, sample_trace):
        text = serialize_trace(sample_trace, TraceFormat.JSON)
        assert parse_trace(text, TraceFormat.JSON) == sample_trace

    def test_empty_input(self):
        with pytest.raises(TraceParseError, match="no events"):
            parse_trace("", TraceFormat.JSON)

    def test_empty_array_is_empty_trace(self):
        assert len(parse_trace("[]", TraceFormat.JSON)) == 0

    def test_missing_key_names_entry(self):
        with pytest.raises(TraceParseError, match="entry 1: missing key"):
            parse_trace('[{"no": 1}]', TraceFormat.JSON)

    def test_unexpected_key(self):
        row = ('{"no": 1, "process": "P1", "operation": "Read", "resource": "FileA",'
               ' "old_state": "Open", "new_state": "Open", "extra": 1}')
        with pytest.raises(TraceParseError, match="unexpected key"):
            parse_trace(f"[{row}]", TraceFormat.JSON)

    def test_bad_number(self):
        row = ('{"no": "1", "process": "P1", "operation": "Read", "resource": "FileA",'
               ' "old_state": "Open", "new_state": "Open"}')
        with pytest.raises(TraceParseError, match="positive integer"):
            parse_trace(f"[{row}]", TraceFormat.JSON)


class TestSerialization:
    def test_tsv_shape(self, sample_trace):
        lines = serialize_trace(sample_trace, TraceFormat.TSV).splitlines()
        assert len(lines) == 38
        assert lines[0] == "no\tprocess\toperation\tresource\told_state\tnew_state"
        assert lines[1] == "1\tP3\tStart\tP1\tUnav.\tRunning"

    def test_single_event(self):
        trace = EventTrace([Event(1, "P1", "Read", "FileA", "Open", "Open")])
        lines = serialize_trace(trace).splitlines()
        assert len(lines) == 2

    def test_matches_bundled_file(self, sample_trace):
        assert serialize_trace(sample_trace) == fixtures.sample_trace_text()

    @given(traces())
    def test_round_trip_tsv(self, trace):
        assert parse_trace(serialize_trace(trace, "tsv"), "tsv") == trace

    @given(traces())
    def test_round_trip_json(self, trace):
        assert parse_trace(serialize_trace(trace, "json"), "json") == trace


class TestValidation:
    def test_sample_pair_is_clean(self, sample_trace, sample_model):
        assert validate_against_model(sample_trace, sample_model) == []

    def test_sample_trace_state_continuity(self, sample_trace):
        last = {}
        for event in sample_trace:
            if event.resource in last:
                assert event.old_state == last[event.resource]
            last[event.resource] = event.new_state

    def test_illegal_transition_and_discontinuity(self, sample_model):
        trace = EventTrace([
            Event(1, "P1", "Open", "FileA", "Closed", "Open"),
            Event(2, "P1", "Read", "FileA", "Locked", "Open"),
        ])
        violations = validate_against_model(trace, sample_model)
        kinds = {v.kind for v in violations}
        assert kinds == {ViolationKind.ILLEGAL_TRANSITION,
                         ViolationKind.STATE_DISCONTINUITY}
        assert all(v.event_index == 2 for v in violations)

    def test_unknown_resource_and_operation(self, sample_model):
        trace = EventTrace([
            Event(1, "P1", "Read", "FileZ", "Open", "Open"),
            Event(2, "P1", "Shred", "FileA", "Open", "Open"),
        ])
        violations = validate_against_model(trace, sample_model)
        assert [v.kind for v in violations] == [ViolationKind.UNKNOWN_RESOURCE,
                                                ViolationKind.UNKNOWN_OPERATION]

    def test_empty_trace(self, sample_model):
        assert validate_against_model(EventTrace([]), sample_model) == []
