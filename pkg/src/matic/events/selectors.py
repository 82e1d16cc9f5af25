"""
Context selector policies.

The context of an event is an arbitrary subset of its predecessors; a
selector decides which subset.
"""

from dataclasses import dataclass
from typing import List, Protocol, Sequence, Tuple

from matic.errors import ConfigError

from .model import Event, Trace


class ContextSelector(Protocol):
    def select(self, trace: Trace, y: Event, preds: Sequence[Event]) -> List[Event]: ...


@dataclass(frozen=True)
class WindowSelector:
    """The k most recent predecessors (the suffix of the (t_start, id) order)."""

    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ConfigError("Context window must be non-negative", k=self.k)

    def select(self, trace: Trace, y: Event, preds: Sequence[Event]) -> List[Event]:
        if self.k == 0:
            return []
        return list(preds[-self.k:])


@dataclass(frozen=True)
class ExplicitSelector:
    """A fixed list of event ids; ids that do not precede y are dropped."""

    ids: Tuple[str, ...]

    def select(self, trace: Trace, y: Event, preds: Sequence[Event]) -> List[Event]:
        allowed = {e.id for e in preds}
        chosen = []
        for event_id in self.ids:
            event = trace.get(event_id)
            if event_id in allowed:
                chosen.append(event)
        return chosen


def selector_from_spec(spec: str):
    """
    Parse a selector given on the command line.

    `window:3` or a bare integer selects a window; `ids:a,b` an explicit list.
    """
    text = spec.strip()
    if text.startswith("ids:"):
        ids = tuple(s for s in text[4:].split(",") if s)
        return ExplicitSelector(ids)
    if text.startswith("window:"):
        text = text[7:]
    try:
        return WindowSelector(int(text))
    except ValueError:
        raise ConfigError(f"Unknown context selector {spec!r}")


__all__ = ["ContextSelector", "WindowSelector", "ExplicitSelector", "selector_from_spec"]
