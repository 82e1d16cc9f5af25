"""
Seeded symbol sources for stationarity experiments.

A source emits one symbol per tick. A regime-switch source changes its
possible set at fixed ticks; each regime draws uniformly from its set.
"""

from typing import Dict, List, Literal, Optional, Sequence

import numpy as np
import structlog
from pydantic import BaseModel, Field, ValidationError, model_validator

from matic.errors import ConfigError
from matic.events import Event, Trace

from .distributions import PossibilitySet
from .profiles import PossibilityFn

logger = structlog.get_logger(__name__)


class Regime(BaseModel):
    start: int = Field(0, ge=0)
    possible: List[str] = Field(min_length=1)
    weights: Optional[List[float]] = None

    @model_validator(mode="after")
    def _weights_match(self):
        if self.weights is not None:
            if len(self.weights) != len(self.possible) or any(w < 0 for w in self.weights):
                raise ValueError("weights must be non-negative, one per possible symbol")
            if sum(self.weights) <= 0:
                raise ValueError("weights must have a positive total")
        return self

    def probabilities(self) -> np.ndarray:
        if self.weights is None:
            return np.full(len(self.possible), 1.0 / len(self.possible))
        w = np.array(self.weights, dtype=float)
        return w / w.sum()


class SourceSpec(BaseModel):
    """Generator scenario: `iid` uses the first regime only."""

    name: str = "source"
    generator: Literal["iid", "regime_switch"] = "iid"
    regimes: List[Regime] = Field(min_length=1)
    length: int = Field(ge=0)
    traces: int = Field(1, ge=1)
    window: Optional[int] = Field(None, ge=1)

    @model_validator(mode="after")
    def _ordered_regimes(self):
        starts = [r.start for r in self.regimes]
        if starts[0] != 0 or starts != sorted(starts) or len(set(starts)) != len(starts):
            raise ValueError("regime starts must begin at 0 and strictly increase")
        return self

    @property
    def alphabet(self) -> List[str]:
        return sorted({s for r in self.regimes for s in r.possible})

    def regime_at(self, tick: int) -> Regime:
        if self.generator == "iid":
            return self.regimes[0]
        current = self.regimes[0]
        for regime in self.regimes:
            if regime.start <= tick:
                current = regime
        return current


def source_spec_from_dict(data: Dict) -> SourceSpec:
    try:
        return SourceSpec.model_validate(data)
    except ValidationError as e:
        raise ConfigError("Invalid source scenario", error=str(e))


def generate_trace(spec: SourceSpec, rng: np.random.Generator, index: int = 0) -> Trace:
    """One trace of `spec.length` symbols, one per tick."""
    events = []
    for t in range(spec.length):
        regime = spec.regime_at(t)
        label = regime.possible[int(rng.choice(len(regime.possible), p=regime.probabilities()))]
        events.append(Event(f"s{index}_{t:06d}", t, 0, label))
    return Trace(frozenset(spec.alphabet), tuple(events), spec.name, None)


def generate_corpus(spec: SourceSpec, seed: int) -> List[Trace]:
    rng = np.random.default_rng(seed)
    corpus = [generate_trace(spec, rng, i) for i in range(spec.traces)]
    logger.info("Source corpus generated", scenario=spec.name, traces=len(corpus), length=spec.length)
    return corpus


def iid_source(alphabet: Sequence[str], length: int, seed: int, weights: Optional[Sequence[float]] = None) -> Trace:
    spec = SourceSpec(
        name="iid",
        generator="iid",
        regimes=[Regime(possible=list(alphabet), weights=None if weights is None else list(weights))],
        length=length,
    )
    return generate_trace(spec, np.random.default_rng(seed))


def regime_switch_source(first: Sequence[str], second: Sequence[str], length: int, seed: int) -> Trace:
    """Uniform over `first` for the first half of the ticks, then over `second`."""
    spec = SourceSpec(
        name="regime_switch",
        generator="regime_switch",
        regimes=[Regime(possible=list(first)), Regime(start=max(length // 2, 1), possible=list(second))],
        length=length,
    )
    return generate_trace(spec, np.random.default_rng(seed))


def regime_possibility(spec: SourceSpec) -> PossibilityFn:
    """Explicit possibility map: the possible set of the regime active at the event's tick."""

    def possible(trace: Trace, y: Event) -> PossibilitySet:
        return PossibilitySet(frozenset(spec.regime_at(y.t_start).possible))

    return possible
