"""
Empirical conditional model for implicature scoring.

Counts outcomes per (context signature, cause label) and per context
signature alone, with Laplace smoothing at lookup time.
"""

import itertools
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import structlog

from matic.errors import ConfigError, DataError, UntrainedModel
from matic.events import Event, Trace, predecessors
from matic.events.io import corpus_from_list

logger = structlog.get_logger(__name__)

Signature = Tuple[str, ...]
MODEL_KIND = "matic.conditional_model"


def signature(events: Iterable[Event]) -> Signature:
    """Multiset of labels, order-insensitive."""
    return tuple(sorted(e.label for e in events))


@dataclass
class ConditionalModel:
    """
    Outcome counts learnt from a corpus of traces.

    Pair observations only use chain-ordered pairs: every context event
    starts no later than the cause, so context.cause.y is itself a chain.
    """

    alphabet: FrozenSet[str] = frozenset()
    smoothing: float = 1.0
    max_context_size: int = 3
    pair_counts: Dict[Tuple[Signature, str], Counter] = field(default_factory=dict)
    context_counts: Dict[Signature, Counter] = field(default_factory=dict)
    n_traces: int = 0

    def __post_init__(self):
        if self.smoothing < 0:
            raise ConfigError("Smoothing must be non-negative", smoothing=self.smoothing)

    @classmethod
    def fit(
        cls,
        corpus: Sequence[Trace],
        max_context_size: int = 3,
        smoothing: float = 1.0,
        horizon: Optional[int] = None,
    ) -> "ConditionalModel":
        """
        Count outcomes over a corpus.

        Args:
            corpus: Training traces
            max_context_size: k, largest context counted
            smoothing: Laplace constant used at lookup
            horizon: Only the latest `horizon` predecessors of each event are
                considered (all when None)

        Returns:
            Trained model
        """
        model = cls(frozenset(), smoothing, max_context_size)
        for trace in corpus:
            model.observe(trace, horizon)
        logger.info(
            "Conditional model trained",
            traces=model.n_traces,
            alphabet=len(model.alphabet),
            pair_keys=len(model.pair_counts),
            context_keys=len(model.context_counts),
        )
        return model

    def observe(self, trace: Trace, horizon: Optional[int] = None) -> None:
        self.alphabet = self.alphabet | trace.alphabet
        self.n_traces += 1
        k = self.max_context_size
        for y in trace.events:
            preds = predecessors(trace, y)
            if horizon is not None:
                preds = preds[-horizon:] if horizon > 0 else []
            for size in range(0, min(k, len(preds)) + 1):
                for ctx in itertools.combinations(preds, size):
                    self.context_counts.setdefault(signature(ctx), Counter())[y.label] += 1
            for cause in preds:
                before = [x for x in preds if x.id != cause.id and x.t_start <= cause.t_start]
                for size in range(0, min(k, len(before)) + 1):
                    for ctx in itertools.combinations(before, size):
                        key = (signature(ctx), cause.label)
                        self.pair_counts.setdefault(key, Counter())[y.label] += 1

    @property
    def is_trained(self) -> bool:
        return self.n_traces > 0 and len(self.alphabet) > 0

    def require_labels(self, *labels: str) -> None:
        if not self.is_trained:
            raise UntrainedModel("The model has not been trained")
        unknown = [lab for lab in labels if lab not in self.alphabet]
        if unknown:
            raise UntrainedModel("Labels unknown to the model", labels=unknown)

    def smoothed(self, counts: Optional[Counter], outcome: str) -> float:
        """(count + λ) / (total + λ·|alphabet|); uniform when both are zero."""
        size = len(self.alphabet)
        count = counts[outcome] if counts else 0
        total = sum(counts.values()) if counts else 0
        denominator = total + self.smoothing * size
        if denominator == 0:
            return 1.0 / size
        return (count + self.smoothing) / denominator

    def pair_probability(self, sig: Signature, cause_label: str, outcome: str) -> float:
        return self.smoothed(self.pair_counts.get((sig, cause_label)), outcome)

    def context_distribution(self, sig: Signature) -> Optional[Dict[str, float]]:
        """Smoothed outcome distribution given a context; None if never observed."""
        counts = self.context_counts.get(sig)
        if not counts:
            return None
        return {label: self.smoothed(counts, label) for label in sorted(self.alphabet)}

    def context_support(self, sig: Signature) -> Optional[FrozenSet[str]]:
        counts = self.context_counts.get(sig)
        if not counts:
            return None
        return frozenset(label for label, c in counts.items() if c > 0)

    # Persistence

    def to_dict(self) -> Dict:
        return {
            "kind": MODEL_KIND,
            "alphabet": sorted(self.alphabet),
            "smoothing": self.smoothing,
            "max_context_size": self.max_context_size,
            "n_traces": self.n_traces,
            "pair_counts": [
                {"context": list(sig), "cause": cause, "outcomes": dict(sorted(counts.items()))}
                for (sig, cause), counts in sorted(self.pair_counts.items())
            ],
            "context_counts": [
                {"context": list(sig), "outcomes": dict(sorted(counts.items()))}
                for sig, counts in sorted(self.context_counts.items())
            ],
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "ConditionalModel":
        if data.get("kind") != MODEL_KIND:
            raise DataError("Not a conditional model file")
        try:
            model = cls(
                frozenset(data["alphabet"]),
                float(data["smoothing"]),
                int(data["max_context_size"]),
                n_traces=int(data["n_traces"]),
            )
            for row in data["pair_counts"]:
                key = (tuple(row["context"]), row["cause"])
                model.pair_counts[key] = Counter({k: int(v) for k, v in row["outcomes"].items()})
            for row in data["context_counts"]:
                counts = Counter({k: int(v) for k, v in row["outcomes"].items()})
                model.context_counts[tuple(row["context"])] = counts
        except (KeyError, TypeError, ValueError) as e:
            raise DataError("Malformed conditional model", error=str(e))
        return model

    def save(self, path: Union[str, Path]) -> None:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, indent=2, sort_keys=True)


def surprisal_bits(p: float) -> float:
    return math.inf if p <= 0.0 else -math.log2(p)


def is_model_document(data: object) -> bool:
    return isinstance(data, dict) and data.get("kind") == MODEL_KIND


def fit_or_load(data: object, max_context_size: int, smoothing: float, horizon: Optional[int]) -> ConditionalModel:
    """A saved model document, or a corpus (list of trace dicts) to fit on."""
    if is_model_document(data):
        return ConditionalModel.from_dict(data)
    corpus: List[Trace] = corpus_from_list(data)
    return ConditionalModel.fit(corpus, max_context_size, smoothing, horizon)
