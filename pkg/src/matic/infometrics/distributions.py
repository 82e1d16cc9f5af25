"""
Symbol distributions, possibility sets and divergences.

Entropy is H = -Σ p log2 p (bits). Possibility is an indicator: a symbol
outside the possible set has probability 0.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Sequence

import numpy as np
from scipy.spatial.distance import jensenshannon
from scipy.stats import entropy as scipy_entropy

from matic.errors import EmptySupport, InvalidDistribution
from matic.implicature.model import surprisal_bits

SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class SymbolDistribution:
    probs: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        probs = {str(k): float(v) for k, v in self.probs.items()}
        if not probs:
            raise InvalidDistribution("A distribution needs at least one symbol")
        values = np.array(list(probs.values()))
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise InvalidDistribution("Probabilities must be finite and non-negative")
        if abs(values.sum() - 1.0) > SUM_TOLERANCE:
            raise InvalidDistribution("Probabilities must sum to 1", total=float(values.sum()))
        object.__setattr__(self, "probs", dict(sorted(probs.items())))

    @property
    def support(self) -> FrozenSet[str]:
        return frozenset(k for k, v in self.probs.items() if v > 0)

    @property
    def labels(self) -> Sequence[str]:
        return list(self.probs)

    def p(self, label: str) -> float:
        return self.probs.get(label, 0.0)

    def vector(self, labels: Sequence[str]) -> np.ndarray:
        return np.array([self.p(lab) for lab in labels])

    @classmethod
    def uniform(cls, labels: Iterable[str]) -> "SymbolDistribution":
        labels = sorted(set(labels))
        return cls({lab: 1.0 / len(labels) for lab in labels})

    @classmethod
    def from_weights(cls, weights: Mapping[str, float]) -> "SymbolDistribution":
        total = float(sum(weights.values()))
        if total <= 0:
            raise InvalidDistribution("Weights must have a positive total")
        return cls({k: v / total for k, v in weights.items()})

    def mix(self, other: "SymbolDistribution", weight: float = 0.5) -> "SymbolDistribution":
        labels = sorted(set(self.probs) | set(other.probs))
        return SymbolDistribution.from_weights(
            {lab: weight * self.p(lab) + (1 - weight) * other.p(lab) for lab in labels}
        )


@dataclass(frozen=True)
class PossibilitySet:
    """Symbols possible in one context state."""

    possible: FrozenSet[str] = frozenset()

    def __contains__(self, label: object) -> bool:
        return label in self.possible

    def __len__(self) -> int:
        return len(self.possible)


def entropy(d: SymbolDistribution) -> float:
    """
    Shannon entropy in bits, with 0·log 0 = 0.

    Args:
        d: A valid distribution

    Returns:
        H(d), between 0 and log2 of the number of symbols
    """
    if not isinstance(d, SymbolDistribution):
        raise InvalidDistribution("entropy expects a SymbolDistribution")
    values = np.array(list(d.probs.values()))
    h = float(scipy_entropy(values, base=2))
    return min(max(h, 0.0), math.log2(len(values)) if len(values) > 1 else 0.0)


def possibility_project(d: SymbolDistribution, pos: PossibilitySet) -> SymbolDistribution:
    """
    Zero the impossible symbols and renormalize the rest.

    Raises:
        EmptySupport: if no symbol of the support is possible
    """
    keep = d.support & pos.possible
    if not keep:
        raise EmptySupport("No possible symbol has positive probability")
    total = sum(d.p(lab) for lab in keep)
    return SymbolDistribution({lab: (d.p(lab) / total if lab in keep else 0.0) for lab in d.probs})


def jensen_shannon(d1: SymbolDistribution, d2: SymbolDistribution) -> float:
    """Jensen-Shannon divergence in bits (in [0, 1])."""
    labels = sorted(set(d1.probs) | set(d2.probs))
    js = float(jensenshannon(d1.vector(labels), d2.vector(labels), base=2)) ** 2
    if not math.isfinite(js):
        return 0.0
    return min(max(js, 0.0), 1.0)


def empirical_distribution(labels: Sequence[str], alphabet: Optional[Iterable[str]] = None) -> SymbolDistribution:
    """Relative frequencies of `labels`, listing every alphabet symbol."""
    if len(labels) == 0:
        raise InvalidDistribution("Cannot estimate a distribution from no symbols")
    counts: Dict[str, float] = {lab: 0.0 for lab in (alphabet or [])}
    for lab in labels:
        counts[lab] = counts.get(lab, 0.0) + 1.0
    return SymbolDistribution.from_weights(counts)


def surprisal(p: float) -> float:
    """-log2 p in bits (infinite for p = 0)."""
    return surprisal_bits(p)
