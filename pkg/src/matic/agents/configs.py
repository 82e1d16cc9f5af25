"""
Configuration models for the reference agents.

All agent configs are pydantic models; validation failures surface as
ConfigError.
"""

import math
from typing import Annotated, Dict, List, Literal, Optional, Type, TypeVar, Union

from pydantic import BaseModel, Field, ValidationError, model_validator

from matic.errors import ConfigError

T = TypeVar("T", bound=BaseModel)


class ReceiverConfig(BaseModel):
    """Matched-filter receiver: one template per symbol and a transition graph."""

    alphabet: List[str] = Field(min_length=1)
    templates: List[List[float]]
    transitions: Dict[str, List[str]]
    noise_var: float = Field(0.0, ge=0.0)
    samples_per_symbol: int = Field(8, ge=1)

    @model_validator(mode="after")
    def _check(self):
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("alphabet symbols must be unique")
        if len(self.templates) != len(self.alphabet):
            raise ValueError("one template per symbol is required")
        for template in self.templates:
            if len(template) != self.samples_per_symbol:
                raise ValueError("every template must have samples_per_symbol samples")
            if not all(math.isfinite(v) for v in template):
                raise ValueError("templates must be finite")
        for symbol in self.alphabet:
            successors = self.transitions.get(symbol)
            if not successors:
                raise ValueError(f"transition graph has no successors for {symbol!r}")
            unknown = set(successors) - set(self.alphabet)
            if unknown:
                raise ValueError(f"unknown successors of {symbol!r}: {sorted(unknown)}")
        extra = set(self.transitions) - set(self.alphabet)
        if extra:
            raise ValueError(f"transitions from unknown symbols: {sorted(extra)}")
        return self

    def index(self, symbol: str) -> int:
        return self.alphabet.index(symbol)

    def allows(self, previous: int, current: int) -> bool:
        return self.alphabet[current] in self.transitions[self.alphabet[previous]]


class PoseSpec(BaseModel):
    name: str
    dx: float = 0.0
    dy: float = 0.0
    dyaw: float = 0.0
    min_ticks: int = Field(1, ge=1)


class ConditionNode(BaseModel):
    type: Literal["condition"] = "condition"
    name: str


class BehaviorNode(BaseModel):
    type: Literal["behavior"] = "behavior"
    pose: str


class SequenceNode(BaseModel):
    type: Literal["sequence"] = "sequence"
    children: List["TreeNode"] = Field(min_length=1)


class SelectorNode(BaseModel):
    type: Literal["selector"] = "selector"
    children: List["TreeNode"] = Field(min_length=1)


class RandomNode(BaseModel):
    type: Literal["random"] = "random"
    children: List["TreeNode"] = Field(min_length=1)
    weights: Optional[List[float]] = None

    @model_validator(mode="after")
    def _weights(self):
        if self.weights is not None:
            if len(self.weights) != len(self.children) or any(w < 0 for w in self.weights):
                raise ValueError("random-select needs one non-negative weight per child")
            if sum(self.weights) <= 0:
                raise ValueError("random-select weights must have a positive total")
        return self


TreeNode = Annotated[
    Union[ConditionNode, BehaviorNode, SequenceNode, SelectorNode, RandomNode],
    Field(discriminator="type"),
]
SequenceNode.model_rebuild()
SelectorNode.model_rebuild()
RandomNode.model_rebuild()


def _tree_leaves(node, kind) -> List:
    if isinstance(node, kind):
        return [node]
    found = []
    for child in getattr(node, "children", []):
        found.extend(_tree_leaves(child, kind))
    return found


class CharacterConfig(BaseModel):
    """Behavior tree over boolean conditions driving an animation state machine."""

    conditions: List[str] = []
    poses: List[PoseSpec] = Field(min_length=1)
    transitions: Dict[str, List[str]] = {}
    tree: TreeNode
    initial_pose: Optional[str] = None

    @model_validator(mode="after")
    def _check(self):
        names = [p.name for p in self.poses]
        if len(set(names)) != len(names):
            raise ValueError("pose names must be unique")
        if len(set(self.conditions)) != len(self.conditions):
            raise ValueError("condition names must be unique")
        for source, targets in self.transitions.items():
            if source not in names or any(t not in names for t in targets):
                raise ValueError(f"transitions from {source!r} reference undeclared poses")
        for leaf in _tree_leaves(self.tree, BehaviorNode):
            if leaf.pose not in names:
                raise ValueError(f"behavior leaf uses undeclared pose {leaf.pose!r}")
        for leaf in _tree_leaves(self.tree, ConditionNode):
            if leaf.name not in self.conditions:
                raise ValueError(f"condition leaf uses undeclared condition {leaf.name!r}")
        if self.initial_pose is not None and self.initial_pose not in names:
            raise ValueError("initial_pose must be a declared pose")
        return self

    @property
    def pose_names(self) -> List[str]:
        return [p.name for p in self.poses]

    @property
    def start_pose(self) -> str:
        return self.initial_pose or self.poses[0].name

    def allows(self, source: str, target: str) -> bool:
        return source == target or target in self.transitions.get(source, [])


class BanditConfig(BaseModel):
    """Multi-armed bandit trained through the GCM reward and learning ports."""

    payouts: List[float] = Field(min_length=1)
    payout_noise: float = Field(0.0, ge=0.0)
    learning_rate: float = Field(0.1, gt=0.0, le=1.0)
    epsilon: float = Field(0.1, ge=0.0, le=1.0)
    training_episodes: int = Field(500, ge=0)
    episodes: Optional[int] = Field(None, ge=0)
    initial_weight: float = 0.0
    learning_schedule: Optional[List[int]] = None

    @model_validator(mode="after")
    def _check(self):
        if not all(math.isfinite(p) for p in self.payouts):
            raise ValueError("payouts must be finite")
        if self.learning_schedule is not None:
            if any(v not in (0, 1) for v in self.learning_schedule):
                raise ValueError("learning_schedule entries must be 0 or 1")
            if len(self.learning_schedule) < self.total_episodes:
                raise ValueError("learning_schedule is shorter than the run")
        return self

    @property
    def arms(self) -> int:
        return len(self.payouts)

    @property
    def total_episodes(self) -> int:
        return self.training_episodes if self.episodes is None else self.episodes

    def learning(self, episode: int) -> int:
        if self.learning_schedule is not None:
            return self.learning_schedule[episode]
        return 1 if episode < self.training_episodes else 0


def parse_config(model: Type[T], data: object) -> T:
    """Validate a config document, wrapping pydantic errors in ConfigError."""
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"Invalid {model.__name__}", error=str(e))
