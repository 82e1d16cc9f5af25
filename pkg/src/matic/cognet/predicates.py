"""
Predicates: outputs of non-circular cognitive systems read as (fuzzy) sets
of events.
"""

from dataclasses import dataclass, field
from typing import Dict, Mapping, Sequence, Union

import numpy as np
import structlog

from matic.errors import DataError, LengthMismatch
from matic.events import Event
from matic.gcm import Signal

from .analysis import stratify_network
from .network import Network
from .runner import run_network

logger = structlog.get_logger(__name__)

EQUIV_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Predicate:
    id: str
    extension: Dict[str, float] = field(default_factory=dict)
    level: int = 0

    def __post_init__(self):
        for event_id, degree in self.extension.items():
            if not 0.0 <= degree <= 1.0:
                raise DataError(f"Degree of {event_id!r} is outside [0, 1]", degree=degree)

    def degree(self, event_id: str) -> float:
        return self.extension.get(event_id, 0.0)

    @property
    def is_crisp(self) -> bool:
        return all(d in (0.0, 1.0) for d in self.extension.values())

    def __hash__(self) -> int:
        return hash((self.id, tuple(sorted(self.extension.items())), self.level))


@dataclass(frozen=True)
class Stimulus:
    """An event together with the external input signals that present it."""

    event: Union[Event, str]
    inputs: Mapping[str, Signal]

    @property
    def event_id(self) -> str:
        return self.event.id if isinstance(self.event, Event) else self.event


def predicate_of(
    net: Network,
    node: str,
    stimuli: Sequence[Stimulus],
    threshold: float = 0.5,
    crisp: bool = False,
    seed: int = 0,
) -> Predicate:
    """
    Read the output of `node` as a predicate over the stimulus events.

    The degree of an event is the mean of the node's (first) output line over
    the stimulus run, clamped to [0, 1]; crisp mode maps degree >= threshold
    to 1 and everything else to 0.

    Raises:
        CircularSystem: if the network is circular
        UnknownNode: if `node` is not in the network
    """
    net.require(node)
    levels = stratify_network(net)
    extension: Dict[str, float] = {}
    for stimulus in stimuli:
        lengths = {s.ticks for s in stimulus.inputs.values()}
        if len(lengths) > 1:
            raise LengthMismatch(
                f"Stimulus {stimulus.event_id!r} has input signals of different lengths"
            )
        ticks = lengths.pop() if lengths else 0
        run = run_network(net, stimulus.inputs, ticks, seed=seed)
        values = run.outputs[node].values
        mean = float(values[:, 0].mean()) if ticks else 0.0
        degree = float(np.clip(mean, 0.0, 1.0))
        if crisp:
            degree = 1.0 if degree >= threshold else 0.0
        extension[stimulus.event_id] = degree
    logger.debug("Predicate computed", node=node, events=len(extension), crisp=crisp)
    return Predicate(id=node, extension=extension, level=levels[node])


def _events(p: Predicate, q: Predicate):
    return sorted(set(p.extension) | set(q.extension))


def predicate_union(p: Predicate, q: Predicate) -> Predicate:
    extension = {e: max(p.degree(e), q.degree(e)) for e in _events(p, q)}
    return Predicate(f"({p.id}∪{q.id})", extension, max(p.level, q.level))


def predicate_intersection(p: Predicate, q: Predicate) -> Predicate:
    extension = {e: min(p.degree(e), q.degree(e)) for e in _events(p, q)}
    return Predicate(f"({p.id}∩{q.id})", extension, max(p.level, q.level))


def predicate_complement(p: Predicate) -> Predicate:
    extension = {e: 1.0 - d for e, d in p.extension.items()}
    return Predicate(f"¬{p.id}", extension, p.level)


def predicate_equiv(p: Predicate, q: Predicate, tolerance: float = EQUIV_TOLERANCE) -> bool:
    return all(abs(p.degree(e) - q.degree(e)) <= tolerance for e in _events(p, q))


def predicate_not_equiv(p: Predicate, q: Predicate, tolerance: float = EQUIV_TOLERANCE) -> bool:
    return not predicate_equiv(p, q, tolerance)


def member_alpha(event_id: str, p: Predicate, alpha: float) -> bool:
    """Fuzzy membership: the event belongs to p at degree alpha or more."""
    return p.degree(event_id) >= alpha


def member(event_id: str, p: Predicate) -> bool:
    return member_alpha(event_id, p, 1.0)


def cardinality(p: Predicate) -> float:
    """Sigma count: sum of degrees (the element count for crisp predicates)."""
    return float(sum(p.extension.values()))
