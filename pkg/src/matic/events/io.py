"""
Trace and corpus files.

Trace file: {"alphabet": [...], "events": [{"id", "t", "d", "label", "agent"}],
"metadata": {"scenario", "seed"}}. Corpus file: a JSON array of traces.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import structlog
from pydantic import BaseModel, Field, ValidationError

from matic.errors import ConfigError, DataError

from .model import Event, Trace

logger = structlog.get_logger(__name__)


class EventRecord(BaseModel):
    id: str
    t: int = Field(ge=0)
    d: int = Field(0, ge=0)
    label: str
    agent: Optional[str] = None


class TraceMetadata(BaseModel):
    scenario: str = ""
    seed: Optional[int] = None


class TraceRecord(BaseModel):
    alphabet: List[str]
    events: List[EventRecord] = []
    metadata: TraceMetadata = TraceMetadata()


def trace_from_dict(data: Dict[str, Any]) -> Trace:
    try:
        record = TraceRecord.model_validate(data)
    except ValidationError as e:
        raise DataError("Malformed trace", error=str(e))
    events = [Event(r.id, r.t, r.d, r.label, r.agent) for r in record.events]
    return Trace(
        frozenset(record.alphabet),
        tuple(events),
        record.metadata.scenario,
        record.metadata.seed,
    )


def trace_to_dict(trace: Trace) -> Dict[str, Any]:
    return {
        "alphabet": sorted(trace.alphabet),
        "events": [
            {"id": e.id, "t": e.t_start, "d": e.duration, "label": e.label, "agent": e.agent}
            for e in trace.events
        ],
        "metadata": {"scenario": trace.scenario, "seed": trace.seed},
    }


def read_json(path: Union[str, Path]) -> Any:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"File not found: {path}", path=str(path))
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise DataError(f"Invalid JSON in {path}", error=str(e))


def load_trace(path: Union[str, Path]) -> Trace:
    trace = trace_from_dict(read_json(path))
    logger.info("Trace loaded", path=str(path), events=len(trace))
    return trace


def save_trace(trace: Trace, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(trace_to_dict(trace), f, indent=2, sort_keys=True)


def corpus_from_list(items: Any) -> List[Trace]:
    if not isinstance(items, list):
        raise DataError("A corpus must be a JSON array of traces")
    return [trace_from_dict(item) for item in items]


def load_corpus(path: Union[str, Path]) -> List[Trace]:
    corpus = corpus_from_list(read_json(path))
    logger.info("Corpus loaded", path=str(path), traces=len(corpus))
    return corpus


def save_corpus(corpus: List[Trace], path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump([trace_to_dict(t) for t in corpus], f, indent=2, sort_keys=True)
