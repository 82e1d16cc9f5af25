"""
Metabolic functions (m) for the GCM slow pathway: h' = m(l, r).
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np

from matic.errors import ConfigError

from .transfer import BinaryRuleTable, TransferFn


class MetabolicKind(Enum):
    FROZEN = "Frozen"
    GATED_REWARD_UPDATE = "GatedRewardUpdate"


def gate_open(l: np.ndarray) -> bool:
    """The learning gate is open when any learning line is active."""
    return bool(np.any(np.asarray(l) > 0.5))


class MetabolicFn:
    kind: MetabolicKind

    def reward_ports(self, h: TransferFn) -> Optional[int]:
        """Number of reward lines this kind expects for h, or None if any."""
        return None

    def apply(self, h: TransferFn, l: np.ndarray, r: np.ndarray, last_fired: Optional[int]) -> TransferFn:
        raise NotImplementedError

    def to_dict(self) -> Dict[str, Any]:
        raise NotImplementedError


@dataclass(frozen=True)
class Frozen(MetabolicFn):
    """h' = h."""

    kind = MetabolicKind.FROZEN

    def apply(self, h: TransferFn, l: np.ndarray, r: np.ndarray, last_fired: Optional[int]) -> TransferFn:
        return h

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind.value}


@dataclass(frozen=True)
class GatedRewardUpdate(MetabolicFn):
    """
    Reward-driven update of rule-table weights, active only while l is on.

    rule `incremental`: w <- w + eta * (r - w); rule `additive`: w <- w + eta * r.
    credit `fired` updates the entry that fired last from the single reward
    line; credit `all` reads one reward line per entry.
    """

    learning_rate: float = 0.1
    rule: str = "incremental"
    credit: str = "fired"

    kind = MetabolicKind.GATED_REWARD_UPDATE

    def __post_init__(self):
        if not 0.0 < self.learning_rate <= 1.0:
            raise ConfigError("Learning rate must be in (0, 1]", learning_rate=self.learning_rate)
        if self.rule not in ("incremental", "additive"):
            raise ConfigError(f"Unknown update rule {self.rule!r}")
        if self.credit not in ("fired", "all"):
            raise ConfigError(f"Unknown credit assignment {self.credit!r}")

    def reward_ports(self, h: TransferFn) -> Optional[int]:
        if not isinstance(h, BinaryRuleTable):
            raise ConfigError("GatedRewardUpdate needs a BinaryRuleTable transfer")
        return len(h.entries) if self.credit == "all" else 1

    def _step(self, w: float, reward: float) -> float:
        if self.rule == "incremental":
            return w + self.learning_rate * (reward - w)
        return w + self.learning_rate * reward

    def apply(self, h: TransferFn, l: np.ndarray, r: np.ndarray, last_fired: Optional[int]) -> TransferFn:
        if not gate_open(l):
            return h
        if not isinstance(h, BinaryRuleTable):
            raise ConfigError("GatedRewardUpdate needs a BinaryRuleTable transfer")
        weights = h.weights
        if self.credit == "all":
            for i in range(len(weights)):
                weights[i] = self._step(weights[i], float(r[i]))
        else:
            if last_fired is None:
                return h
            weights[last_fired] = self._step(weights[last_fired], float(r[0]))
        return h.with_weights(weights)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "learning_rate": self.learning_rate,
            "rule": self.rule,
            "credit": self.credit,
        }


def metabolic_from_dict(data: Optional[Dict[str, Any]]) -> MetabolicFn:
    if not data or data.get("kind", "Frozen") == MetabolicKind.FROZEN.value:
        return Frozen()
    if data["kind"] == MetabolicKind.GATED_REWARD_UPDATE.value:
        return GatedRewardUpdate(
            float(data.get("learning_rate", 0.1)),
            data.get("rule", "incremental"),
            data.get("credit", "fired"),
        )
    raise ConfigError(f"Unknown metabolic kind {data['kind']!r}")
