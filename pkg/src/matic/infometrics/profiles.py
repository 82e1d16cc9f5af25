"""
Time-varying entropy and stationarity checks for MaTIC.

A profile is the entropy of the next-symbol distribution at each event of a
trace, after projecting onto the symbols possible in the current context.
"""

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import structlog

from matic.errors import ConfigError, InsufficientData, UntrainedModel
from matic.events import ContextSelector, Event, Trace, context_of
from matic.implicature.model import ConditionalModel, signature

from .distributions import (
    PossibilitySet,
    SymbolDistribution,
    empirical_distribution,
    entropy,
    jensen_shannon,
    possibility_project,
)

logger = structlog.get_logger(__name__)

PossibilityFn = Callable[[Trace, Event], PossibilitySet]


class StationarityVerdict(Enum):
    STATIONARY = "stationary"
    NON_STATIONARY = "non_stationary"


@dataclass(frozen=True)
class StationarityResult:
    verdict: StationarityVerdict
    max_divergence: float
    windows: int
    worst_pair: Tuple[int, int]
    tau: float

    def to_dict(self) -> Dict[str, object]:
        return {
            "verdict": self.verdict.value,
            "max_divergence": self.max_divergence,
            "windows": self.windows,
            "worst_pair": list(self.worst_pair),
            "tau": self.tau,
        }


@dataclass(frozen=True)
class ProfilePoint:
    event_id: str
    tick: int
    label: str
    bits: float
    possible: int


def _model_distribution(model: ConditionalModel, sig) -> Tuple[SymbolDistribution, frozenset]:
    probs = model.context_distribution(sig)
    support = model.context_support(sig)
    if probs is None:
        probs = model.context_distribution(())
        support = model.context_support(())
    if probs is None:
        raise UntrainedModel("The model has no outcome counts")
    return SymbolDistribution(probs), support


def model_possibility(model: ConditionalModel, selector: ContextSelector) -> PossibilityFn:
    """Possible symbols are those the model has seen follow the context."""

    def possible(trace: Trace, y: Event) -> PossibilitySet:
        _, support = _model_distribution(model, signature(context_of(trace, y, selector)))
        return PossibilitySet(frozenset(support))

    return possible


def entropy_profile(
    trace: Trace,
    model: ConditionalModel,
    selector: ContextSelector,
    possibility: Optional[PossibilityFn] = None,
) -> List[ProfilePoint]:
    """
    Entropy at every event of `trace`.

    Args:
        trace: Trace to profile
        model: Trained conditional model
        selector: Chooses the context events preceding each event
        possibility: Possible-symbol map; the model's observed support when None

    Returns:
        One point per event, in trace order
    """
    if not model.is_trained:
        raise UntrainedModel("The model has not been trained")
    possibility = possibility or model_possibility(model, selector)
    points = []
    for y in trace.events:
        dist, _ = _model_distribution(model, signature(context_of(trace, y, selector)))
        pos = possibility(trace, y)
        projected = possibility_project(dist, pos)
        points.append(ProfilePoint(y.id, y.t_start, y.label, entropy(projected), len(projected.support)))
    logger.debug("Entropy profile computed", trace=trace.scenario, events=len(points))
    return points


def time_varying_entropy(
    trace: Trace,
    model: ConditionalModel,
    selector: ContextSelector,
    possibility: Optional[PossibilityFn] = None,
) -> List[Tuple[int, float]]:
    """(tick, bits) at every event of the trace."""
    return [(p.tick, p.bits) for p in entropy_profile(trace, model, selector, possibility)]


def window_distributions(traces: Sequence[Trace], window: int) -> Dict[int, SymbolDistribution]:
    """Empirical symbol distribution per window of `window` ticks, pooled over traces."""
    if window <= 0:
        raise ConfigError("Window must be a positive number of ticks", window=window)
    alphabet = sorted(set().union(*(t.alphabet for t in traces))) if traces else []
    buckets: Dict[int, List[str]] = {}
    for trace in traces:
        for e in trace.events:
            buckets.setdefault(e.t_start // window, []).append(e.label)
    return {w: empirical_distribution(labels, alphabet) for w, labels in sorted(buckets.items())}


def stationarity_test(traces: Sequence[Trace], window: int, tau: float = 0.05) -> StationarityResult:
    """
    Compare windowed symbol distributions.

    The source is non-stationary when any two windows differ by more than
    `tau` bits of Jensen-Shannon divergence.

    Raises:
        InsufficientData: with fewer than two non-empty windows
    """
    if tau < 0:
        raise ConfigError("tau must be non-negative", tau=tau)
    dists = window_distributions(traces, window)
    if len(dists) < 2:
        raise InsufficientData("Stationarity needs at least two non-empty windows", windows=len(dists))
    worst = 0.0
    worst_pair = (0, 0)
    for (i, di), (j, dj) in itertools.combinations(dists.items(), 2):
        js = jensen_shannon(di, dj)
        if js > worst:
            worst, worst_pair = js, (i, j)
    verdict = StationarityVerdict.NON_STATIONARY if worst > tau else StationarityVerdict.STATIONARY
    logger.info(
        "Stationarity tested",
        windows=len(dists),
        max_divergence=round(worst, 6),
        verdict=verdict.value,
    )
    return StationarityResult(verdict, worst, len(dists), worst_pair, tau)


def check_possibility_bound(trace: Trace, possibility: PossibilityFn) -> List[str]:
    """Ids of events whose label lies outside their context's possible set."""
    return [y.id for y in trace.events if y.label not in possibility(trace, y)]
