"""
Event model for MaTIC.

Timed events, chains with a partial temporal order, and traces (full
scenario histories kept in (t_start, id) order).
"""

import bisect
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

import structlog

from matic.errors import DataError, DuplicateEvent, EmptyChain, UnknownEvent

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class Event:
    """A timed occurrence carrying one symbol of the trace alphabet."""

    id: str
    t_start: int
    duration: int
    label: str
    agent: Optional[str] = None

    def __post_init__(self):
        if not self.id:
            raise DataError("Event id must be non-empty")
        if self.t_start < 0:
            raise DataError("Event start must be non-negative", event=self.id, t=self.t_start)
        if self.duration < 0:
            raise DataError("Event duration must be non-negative", event=self.id, d=self.duration)

    @property
    def t_end(self) -> int:
        return self.t_start + self.duration

    @property
    def order_key(self) -> Tuple[int, str]:
        return (self.t_start, self.id)


@dataclass(frozen=True)
class Chain:
    """Sequence of events read left to right with the `.` operator."""

    events: Tuple[Event, ...] = ()

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self) -> Iterator[Event]:
        return iter(self.events)

    @property
    def ids(self) -> Tuple[str, ...]:
        return tuple(e.id for e in self.events)

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(e.label for e in self.events)

    def render(self) -> str:
        """Dot notation, e.g. `a.b.c`."""
        return ".".join(self.ids)


class ChainStatus(Enum):
    VALID = "valid"
    INVALID = "invalid"


@dataclass(frozen=True)
class ChainVerdict:
    status: ChainStatus
    index: Optional[int] = None

    @property
    def is_valid(self) -> bool:
        return self.status is ChainStatus.VALID


def validate_chain(events: Sequence[Event]) -> ChainVerdict:
    """
    Check that start times never decrease along the sequence.

    End times are unconstrained: `a` may finish after `b` starts.

    Args:
        events: Candidate chain, in reading order

    Returns:
        VALID, or INVALID with the index of the first offending event
    """
    if len(events) == 0:
        raise EmptyChain("A chain needs at least one event")
    for i in range(1, len(events)):
        if events[i].t_start < events[i - 1].t_start:
            return ChainVerdict(ChainStatus.INVALID, i)
    return ChainVerdict(ChainStatus.VALID)


@dataclass(frozen=True)
class Trace:
    """
    A scenario history: alphabet, events sorted by (t_start, id), metadata.

    Traces are immutable; `insert` returns a new trace.
    """

    alphabet: FrozenSet[str]
    events: Tuple[Event, ...] = ()
    scenario: str = ""
    seed: Optional[int] = None
    _index: Dict[str, int] = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        ordered = tuple(sorted(self.events, key=lambda e: e.order_key))
        object.__setattr__(self, "alphabet", frozenset(self.alphabet))
        object.__setattr__(self, "events", ordered)
        index: Dict[str, int] = {}
        for i, event in enumerate(ordered):
            if event.id in index:
                raise DuplicateEvent(f"Duplicate event id {event.id!r}", event=event.id)
            if event.label not in self.alphabet:
                raise DataError(
                    f"Label {event.label!r} of event {event.id!r} is not in the alphabet",
                    event=event.id,
                )
            index[event.id] = i
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_events(
        cls,
        events: Iterable[Event],
        alphabet: Optional[Iterable[str]] = None,
        scenario: str = "",
        seed: Optional[int] = None,
    ) -> "Trace":
        events = list(events)
        labels = set(alphabet) if alphabet is not None else {e.label for e in events}
        return cls(frozenset(labels), tuple(events), scenario, seed)

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self) -> Iterator[Event]:
        return iter(self.events)

    def __contains__(self, event: object) -> bool:
        if not isinstance(event, Event):
            return False
        i = self._index.get(event.id)
        return i is not None and self.events[i] == event

    def get(self, event_id: str) -> Event:
        i = self._index.get(event_id)
        if i is None:
            raise UnknownEvent(f"Event {event_id!r} is not in the trace", event=event_id)
        return self.events[i]

    def position(self, event: Event) -> int:
        if event not in self:
            raise UnknownEvent(f"Event {event.id!r} is not in the trace", event=event.id)
        return self._index[event.id]

    def insert(self, event: Event) -> "Trace":
        if event.id in self._index:
            raise DuplicateEvent(f"Duplicate event id {event.id!r}", event=event.id)
        keys = [e.order_key for e in self.events]
        at = bisect.bisect_right(keys, event.order_key)
        events = self.events[:at] + (event,) + self.events[at:]
        alphabet = self.alphabet | {event.label}
        return Trace(alphabet, events, self.scenario, self.seed)

    @property
    def labels(self) -> List[str]:
        return [e.label for e in self.events]

    @property
    def end_time(self) -> int:
        return max((e.t_end for e in self.events), default=0)


def predecessors(trace: Trace, y: Event) -> List[Event]:
    """Events x != y with t_start(x) <= t_start(y), in (t_start, id) order."""
    trace.position(y)
    return [x for x in trace.events if x.id != y.id and x.t_start <= y.t_start]


def candidate_causes(trace: Trace, y: Event) -> FrozenSet[Event]:
    """
    All events that may be the implied cause of y.

    Args:
        trace: Trace containing y
        y: The event to explain

    Returns:
        {x in trace | t_start(x) <= t_start(y), x != y}
    """
    return frozenset(predecessors(trace, y))


def context_of(trace: Trace, y: Event, selector) -> Chain:
    """
    Context chain of y chosen by a selector policy.

    Args:
        trace: Trace containing y
        y: The event whose context is requested
        selector: A context selector (see `matic.events.selectors`)

    Returns:
        Chain of predecessors of y in (t_start, id) order
    """
    chosen = selector.select(trace, y, predecessors(trace, y))
    return Chain(tuple(sorted(chosen, key=lambda e: e.order_key)))
