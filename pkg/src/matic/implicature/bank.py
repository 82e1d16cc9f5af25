"""
GCM-bank backend for implied-cause inference.

The bank holds one module per (context, cause) pair drawn from every other
event of the trace. A module's inhibitory line is raised when its context was
not realised before y, its excitatory line carries the presence of the cause,
and its tabulated response is the smoothed probability of y under that pair.
The most active module names the cause.
"""

import itertools
from typing import Iterable, List, Optional, Set, Tuple

import numpy as np
import structlog

from matic.errors import NoCandidates
from matic.events import Event, Trace, predecessors
from matic.gcm import Gcm, Ports, TabulatedNonlinear, step_fast

from .engine import CandidatePair, _prepare
from .model import ConditionalModel, surprisal_bits

logger = structlog.get_logger(__name__)



def pair_module(model: ConditionalModel, pair: CandidatePair, outcome: str) -> Gcm:
    p = model.pair_probability(pair.signature, pair.cause.label, outcome)
    transfer = TabulatedNonlinear(np.array([1.0]), np.array([0.0, 1.0]), np.array([0.0, p]))
    return Gcm(transfer, ports=Ports(p=1, n=1))


def bank_pairs(trace: Trace, y: Event, k: int) -> List[Tuple[frozenset, Event]]:
    """Every (context, cause) pair over the events of `trace` other than y."""
    others = [e for e in trace.events if e.id != y.id]
    pairs = []
    for cause in others:
        rest = [x for x in others if x.id != cause.id]
        for size in range(0, min(k, len(rest)) + 1):
            for ctx in itertools.combinations(rest, size):
                pairs.append((frozenset(ctx), cause))
    return pairs


def gate_lines(pair: CandidatePair, present: Set[str]) -> Tuple[List[float], List[float]]:
    """(inhibitory, excitatory) inputs of a pair module."""
    context_absent = 0.0 if all(e.id in present for e in pair.context) else 1.0
    cause_present = 1.0 if pair.cause.id in present else 0.0
    return [context_absent], [cause_present]


def infer_cause_bank(
    model: ConditionalModel,
    trace: Trace,
    y: Event,
    k: int = 3,
    present: Optional[Iterable[str]] = None,
) -> CandidatePair:
    """
    Implied cause of y read off a bank of pair modules.

    Args:
        model: Trained conditional model
        trace: Trace containing y
        y: The event to explain
        k: Largest context size
        present: Ids of the events realised before y; the predecessors of y
            when None, which makes the bank agree with `infer_cause`

    Raises:
        NoCandidates: if no module fires
    """
    _prepare(model, trace, y)
    model.require_labels(*(e.label for e in trace.events))
    realised = {e.id for e in predecessors(trace, y)} if present is None else set(present)
    rng = np.random.default_rng(0)
    best: Optional[Tuple[float, Tuple, CandidatePair]] = None
    pairs = bank_pairs(trace, y, k)
    for context, cause in pairs:
        pair = CandidatePair(context, cause)
        p, n = gate_lines(pair, realised)
        out = float(step_fast(pair_module(model, pair, y.label), p, n, rng)[0])
        if out <= 0.0:
            continue
        key = (-out, pair.tie_key())
        if best is None or key < best[:2]:
            best = (-out, pair.tie_key(), pair)
    if best is None:
        raise NoCandidates(f"No bank module fires for {y.id!r}", event=y.id)
    pair = best[2]
    logger.debug("Bank inferred cause", event_id=y.id, cause=pair.cause.id, modules=len(pairs))
    return CandidatePair(pair.context, pair.cause, surprisal_bits(-best[0]))
