import pytest

from matic.errors import DataError, DuplicateEvent, EmptyChain, UnknownEvent
from matic.events import (
    ChainStatus,
    Event,
    ExplicitSelector,
    Trace,
    WindowSelector,
    candidate_causes,
    context_of,
    predecessors,
    selector_from_spec,
    validate_chain,
)
from matic.events.io import corpus_from_list, trace_from_dict, trace_to_dict


def test_events_are_kept_in_start_then_id_order():
    events = [Event("b", 1, 0, "x"), Event("z", 0, 0, "x"), Event("a", 1, 3, "x")]
    trace = Trace(frozenset({"x"}), tuple(events))
    assert [e.id for e in trace] == ["z", "a", "b"]


def test_label_outside_alphabet_is_rejected():
    with pytest.raises(DataError):
        Trace(frozenset({"a"}), (Event("e1", 0, 0, "b"),))


def test_duplicate_ids_are_rejected():
    with pytest.raises(DuplicateEvent):
        Trace(frozenset({"a"}), (Event("e1", 0, 0, "a"), Event("e1", 1, 0, "a")))


def test_negative_start_is_rejected():
    with pytest.raises(DataError):
        Event("e1", -1, 0, "a")


def test_insert_keeps_order_and_returns_new_trace(abc_trace):
    longer = abc_trace.insert(Event("e0", 1, 0, "d"))
    assert [e.id for e in longer] == ["e1", "e0", "e2", "e3"]
    assert "d" in longer.alphabet
    assert len(abc_trace) == 3


def test_insert_duplicate_id_fails(abc_trace):
    with pytest.raises(DuplicateEvent):
        abc_trace.insert(Event("e2", 5, 0, "a"))


def test_chain_validation_reports_first_offending_index():
    a, b, c = Event("a", 0, 5, "x"), Event("b", 2, 0, "x"), Event("c", 1, 0, "x")
    assert validate_chain([a, b]).status is ChainStatus.VALID
    verdict = validate_chain([a, b, c])
    assert verdict.status is ChainStatus.INVALID
    assert verdict.index == 2


def test_overlapping_events_form_a_valid_chain():
    # a finishes after b starts
    a, b = Event("a", 0, 10, "x"), Event("b", 3, 1, "x")
    assert validate_chain([a, b]).is_valid


def test_empty_chain_is_an_error():
    with pytest.raises(EmptyChain):
        validate_chain([])


def test_candidate_causes_include_simultaneous_events():
    events = [Event("e1", 0, 0, "a"), Event("e2", 1, 0, "b"), Event("e3", 1, 0, "c"), Event("e4", 2, 0, "a")]
    trace = Trace(frozenset({"a", "b", "c"}), tuple(events))
    causes = candidate_causes(trace, trace.get("e3"))
    assert {e.id for e in causes} == {"e1", "e2"}
    assert [e.id for e in predecessors(trace, trace.get("e2"))] == ["e1", "e3"]


def test_first_event_has_no_candidate_causes(abc_trace):
    assert candidate_causes(abc_trace, abc_trace.get("e1")) == frozenset()


def test_unknown_event_lookup_fails(abc_trace):
    with pytest.raises(UnknownEvent):
        abc_trace.get("nope")
    with pytest.raises(UnknownEvent):
        candidate_causes(abc_trace, Event("other", 0, 0, "a"))


def test_window_selector_takes_most_recent_predecessors(abc_trace):
    y = abc_trace.get("e3")
    assert context_of(abc_trace, y, WindowSelector(1)).ids == ("e2",)
    assert context_of(abc_trace, y, WindowSelector(5)).ids == ("e1", "e2")
    assert context_of(abc_trace, y, WindowSelector(0)).ids == ()


def test_explicit_selector_drops_non_predecessors(abc_trace):
    chain = context_of(abc_trace, abc_trace.get("e2"), ExplicitSelector(("e3", "e1")))
    assert chain.ids == ("e1",)
    assert chain.render() == "e1"


def test_selector_specs():
    assert selector_from_spec("window:2") == WindowSelector(2)
    assert selector_from_spec("3") == WindowSelector(3)
    assert selector_from_spec("ids:e1,e2") == ExplicitSelector(("e1", "e2"))


def test_trace_file_round_trip(abc_trace):
    again = trace_from_dict(trace_to_dict(abc_trace))
    assert again == abc_trace


def test_malformed_trace_file_is_a_data_error():
    with pytest.raises(DataError):
        trace_from_dict({"alphabet": ["a"], "events": [{"id": "e1", "label": "a"}]})
    with pytest.raises(DataError):
        corpus_from_list({"not": "a list"})
