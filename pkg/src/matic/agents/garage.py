"""
The roadside garage exchange.

A approaches B, says they are out of petrol, and B replies that there is a
garage around the corner. The reply's implied cause is the petrol statement.
"""

from typing import Any, Dict, List, Sequence, Tuple

from matic.events import Event, Trace
from matic.events.io import corpus_from_list, trace_from_dict, trace_to_dict
from matic.errors import ConfigError

APPROACH = "approach"
OUT_OF_PETROL = "out_of_petrol"
GARAGE_REPLY = "garage_reply"
ASK_TIME = "ask_time"
TIME_REPLY = "time_reply"

ALPHABET = frozenset({APPROACH, OUT_OF_PETROL, GARAGE_REPLY, ASK_TIME, TIME_REPLY})

# (label sequence, number of copies) making up the training corpus
CORPUS_PLAN: Tuple[Tuple[Tuple[str, ...], int], ...] = (
    ((APPROACH, OUT_OF_PETROL, GARAGE_REPLY), 8),
    ((APPROACH, ASK_TIME, TIME_REPLY), 8),
    ((OUT_OF_PETROL, GARAGE_REPLY), 3),
)


def _dialogue(prefix: str, labels: Sequence[str], scenario: str) -> Trace:
    speakers = ("A", "B")
    events = [
        Event(f"{prefix}{i + 1}", i, 1, label, speakers[0 if i < len(labels) - 1 else 1])
        for i, label in enumerate(labels)
    ]
    return Trace(ALPHABET, tuple(events), scenario)


def garage_scenario() -> Tuple[Trace, List[Trace]]:
    """The exchange to interpret and the corpus the listener learnt from."""
    trace = _dialogue("e", (APPROACH, OUT_OF_PETROL, GARAGE_REPLY), "garage")
    corpus: List[Trace] = []
    for labels, copies in CORPUS_PLAN:
        for _ in range(copies):
            corpus.append(_dialogue(f"c{len(corpus)}_", labels, "garage-corpus"))
    return trace, corpus


def garage_to_dict() -> Dict[str, Any]:
    trace, corpus = garage_scenario()
    return {
        "kind": "garage",
        "query": trace.events[-1].id,
        "trace": trace_to_dict(trace),
        "corpus": [trace_to_dict(t) for t in corpus],
    }


def garage_from_dict(data: Dict[str, Any]) -> Tuple[Trace, List[Trace], str]:
    """Load a garage-style scenario document: (trace, corpus, query event id)."""
    if not isinstance(data, dict) or "trace" not in data or "corpus" not in data:
        raise ConfigError("A dialogue scenario needs 'trace' and 'corpus'")
    trace = trace_from_dict(data["trace"])
    query = data.get("query") or trace.events[-1].id
    return trace, corpus_from_list(data["corpus"]), query
