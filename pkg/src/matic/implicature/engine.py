"""
Implied-cause inference by surprisal minimization.

Every (context, cause) pair over the predecessors of y is a hypothesis; the
winner minimizes -log2 p(label(y) | context signature, cause label). Ties go
to the smaller context, then the earlier cause, then the cause id.
"""

import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple

import structlog

from matic.errors import DataError, NoCandidates
from matic.events import Event, Trace, predecessors

from .lattice import build_lattice, contexts_for
from .model import ConditionalModel, Signature, signature, surprisal_bits

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class CandidatePair:
    """A (context y*, cause y**) hypothesis for y; surprisal in bits."""

    context: FrozenSet[Event]
    cause: Event
    surprisal: float = 0.0

    @property
    def context_ids(self) -> Tuple[str, ...]:
        return tuple(sorted(e.id for e in self.context))

    @property
    def signature(self) -> Signature:
        return signature(self.context)

    def tie_key(self) -> Tuple:
        return (len(self.context), self.cause.t_start, self.cause.id, self.context_ids)

    def rank_key(self) -> Tuple:
        return (self.surprisal,) + self.tie_key()

    def to_row(self) -> Dict[str, object]:
        return {
            "context": ".".join(e.id for e in sorted(self.context, key=lambda e: e.order_key)),
            "cause": self.cause.id,
            "context_size": len(self.context),
            "surprisal_bits": self.surprisal,
        }


def _check_pair(trace: Trace, y: Event, pair: CandidatePair) -> None:
    preds = {e.id for e in predecessors(trace, y)}
    if pair.cause in pair.context:
        raise DataError("The cause may not belong to its own context", cause=pair.cause.id)
    members = [pair.cause.id] + [e.id for e in pair.context]
    outside = [m for m in members if m not in preds]
    if outside:
        raise DataError("Pair members must precede y", event=y.id, members=outside)


def score_candidate(model: ConditionalModel, trace: Trace, y: Event, pair: CandidatePair) -> float:
    """
    Surprisal of y under a candidate pair.

    Args:
        model: Trained conditional model sharing the trace alphabet
        trace: Trace containing y
        y: The event to explain
        pair: Candidate (context, cause)

    Returns:
        -log2 of the Laplace-smoothed probability of label(y), in bits
    """
    trace.position(y)
    model.require_labels(y.label, pair.cause.label, *(e.label for e in pair.context))
    _check_pair(trace, y, pair)
    p = model.pair_probability(pair.signature, pair.cause.label, y.label)
    return surprisal_bits(p)


def _scored(model: ConditionalModel, y: Event, context: FrozenSet[Event], cause: Event) -> CandidatePair:
    p = model.pair_probability(signature(context), cause.label, y.label)
    return CandidatePair(context, cause, surprisal_bits(p))


def _prepare(model: ConditionalModel, trace: Trace, y: Event) -> List[Event]:
    preds = predecessors(trace, y)
    if not preds:
        raise NoCandidates(f"Event {y.id!r} has no preceding events", event=y.id)
    model.require_labels(y.label, *(e.label for e in preds))
    return preds


def infer_cause(model: ConditionalModel, trace: Trace, y: Event, k: int = 3) -> CandidatePair:
    """
    Most likely implied cause of y.

    Contexts are the lattice elements that meet {cause} at bottom. Pairs
    sharing (context signature, cause label) score identically, so each such
    group is scored once through its tie-break representative.

    Raises:
        NoCandidates: if y has no predecessors
    """
    preds = _prepare(model, trace, y)
    lattice = build_lattice(trace, y, k)
    by_id = {e.id: e for e in preds}
    groups: Dict[Tuple[Signature, str], CandidatePair] = {}
    for cause in preds:
        for element in contexts_for(lattice, cause.id, k):
            pair = CandidatePair(frozenset(by_id[i] for i in element), cause)
            key = (pair.signature, cause.label)
            best = groups.get(key)
            if best is None or pair.tie_key() < best.tie_key():
                groups[key] = pair
    winner: Optional[CandidatePair] = None
    for (sig, cause_label), pair in groups.items():
        scored = CandidatePair(
            pair.context, pair.cause, surprisal_bits(model.pair_probability(sig, cause_label, y.label))
        )
        if winner is None or scored.rank_key() < winner.rank_key():
            winner = scored
    logger.debug(
        "Implied cause inferred",
        event_id=y.id,
        cause=winner.cause.id,
        context=list(winner.context_ids),
        surprisal=winner.surprisal,
    )
    return winner


def all_pairs(trace: Trace, y: Event, k: int) -> List[Tuple[FrozenSet[Event], Event]]:
    preds = predecessors(trace, y)
    pairs = []
    for cause in preds:
        others = [x for x in preds if x.id != cause.id]
        for size in range(0, min(k, len(others)) + 1):
            for ctx in itertools.combinations(others, size):
                pairs.append((frozenset(ctx), cause))
    return pairs


def brute_force_oracle(model: ConditionalModel, trace: Trace, y: Event, k: int = 3) -> CandidatePair:
    """Score every pair, no grouping or pruning."""
    _prepare(model, trace, y)
    best: Optional[CandidatePair] = None
    for context, cause in all_pairs(trace, y, k):
        pair = _scored(model, y, context, cause)
        if best is None or pair.rank_key() < best.rank_key():
            best = pair
    return best


def rank_candidates(model: ConditionalModel, trace: Trace, y: Event, k: int = 3) -> List[CandidatePair]:
    """All scored pairs, best first."""
    _prepare(model, trace, y)
    pairs = [_scored(model, y, context, cause) for context, cause in all_pairs(trace, y, k)]
    return sorted(pairs, key=CandidatePair.rank_key)
