"""
Transfer functions (h) for the GCM fast pathway.

Three kinds: binary rule tables, matched filter banks and tabulated
nonlinearities. All are immutable; learning produces a new instance.
"""

import itertools
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from matic.errors import ConfigError


class TransferKind(Enum):
    BINARY_RULE_TABLE = "BinaryRuleTable"
    MATCHED_FILTER_BANK = "MatchedFilterBank"
    TABULATED_NONLINEAR = "TabulatedNonlinear"


class Selection(Enum):
    """How a rule table picks among entries matching the same pattern."""

    GREEDY = "greedy"
    STOCHASTIC = "stochastic"
    EPSILON_GREEDY = "epsilon_greedy"


MAX_RULE_ARITY = 16


class TransferFn:
    """Base class: o = h(n), before possibility gating and noise."""

    kind: TransferKind

    @property
    def arity(self) -> int:
        raise NotImplementedError

    @property
    def output_dim(self) -> int:
        raise NotImplementedError

    def evaluate(self, n: np.ndarray, rng: np.random.Generator) -> Tuple[np.ndarray, Optional[int]]:
        """Return the output vector and the index of the fired entry, if any."""
        raise NotImplementedError

    def to_dict(self) -> Dict[str, Any]:
        raise NotImplementedError

    def serialize(self) -> str:
        """Canonical JSON; equal strings mean bit-identical parameters."""
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def is_binary(self) -> bool:
        return False


@dataclass(frozen=True)
class RuleEntry:
    pattern: Tuple[int, ...]
    output: Tuple[float, ...]
    weight: float = 1.0


def _pattern_code(bits: Sequence[int]) -> int:
    code = 0
    for i, b in enumerate(bits):
        code |= (int(b) & 1) << i
    return code


@dataclass(frozen=True)
class BinaryRuleTable(TransferFn):
    """
    Lookup table over binarized excitatory inputs.

    Several entries may share a pattern; `selection` decides which one fires.
    The table must cover every pattern in {0,1}^arity.
    """

    input_arity: int
    entries: Tuple[RuleEntry, ...]
    selection: Selection = Selection.GREEDY
    epsilon: float = 0.0
    _by_code: Dict[int, Tuple[int, ...]] = field(default_factory=dict, init=False, repr=False, compare=False)

    kind = TransferKind.BINARY_RULE_TABLE

    def __post_init__(self):
        if not 0 <= self.input_arity <= MAX_RULE_ARITY:
            raise ConfigError(f"Rule table arity must be in [0, {MAX_RULE_ARITY}]", arity=self.input_arity)
        if not self.entries:
            raise ConfigError("Rule table needs at least one entry")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ConfigError("epsilon must be in [0, 1]", epsilon=self.epsilon)
        dims = {len(e.output) for e in self.entries}
        if len(dims) != 1 or 0 in dims:
            raise ConfigError("Rule outputs must share one non-zero dimension")
        by_code: Dict[int, List[int]] = {}
        for i, entry in enumerate(self.entries):
            if len(entry.pattern) != self.input_arity or any(b not in (0, 1) for b in entry.pattern):
                raise ConfigError("Rule pattern does not match the table arity", entry=i)
            if not np.all(np.isfinite(entry.output)) or not np.isfinite(entry.weight):
                raise ConfigError("Rule outputs and weights must be finite", entry=i)
            by_code.setdefault(_pattern_code(entry.pattern), []).append(i)
        missing = [
            p for p in itertools.product((0, 1), repeat=self.input_arity) if _pattern_code(p) not in by_code
        ]
        if missing:
            raise ConfigError(
                "Rule table is not total over its input arity",
                missing="".join(map(str, missing[0])),
            )
        object.__setattr__(self, "_by_code", {k: tuple(v) for k, v in by_code.items()})

    @property
    def arity(self) -> int:
        return self.input_arity

    @property
    def output_dim(self) -> int:
        return len(self.entries[0].output)

    @property
    def weights(self) -> np.ndarray:
        return np.array([e.weight for e in self.entries], dtype=float)

    def candidates(self, bits: Sequence[int]) -> Tuple[int, ...]:
        return self._by_code[_pattern_code(bits)]

    def _greedy(self, candidates: Tuple[int, ...]) -> int:
        weights = [self.entries[i].weight for i in candidates]
        return candidates[int(np.argmax(weights))]

    def choose(self, candidates: Tuple[int, ...], rng: np.random.Generator) -> int:
        if len(candidates) == 1:
            return candidates[0]
        if self.selection is Selection.GREEDY:
            return self._greedy(candidates)
        if self.selection is Selection.EPSILON_GREEDY:
            if rng.random() < self.epsilon:
                return candidates[int(rng.integers(len(candidates)))]
            return self._greedy(candidates)
        weights = np.array([max(self.entries[i].weight, 0.0) for i in candidates])
        total = weights.sum()
        probs = weights / total if total > 0 else np.full(len(candidates), 1.0 / len(candidates))
        return candidates[int(rng.choice(len(candidates), p=probs))]

    def evaluate(self, n: np.ndarray, rng: np.random.Generator) -> Tuple[np.ndarray, Optional[int]]:
        bits = (np.asarray(n) > 0.5).astype(int)
        fired = self.choose(self.candidates(bits), rng)
        return np.array(self.entries[fired].output, dtype=float), fired

    def greedy_entry(self, bits: Sequence[int] = ()) -> int:
        return self._greedy(self.candidates(bits))

    def with_weights(self, weights: Sequence[float]) -> "BinaryRuleTable":
        entries = tuple(
            RuleEntry(e.pattern, e.output, float(w)) for e, w in zip(self.entries, weights)
        )
        return BinaryRuleTable(self.input_arity, entries, self.selection, self.epsilon)

    def is_binary(self) -> bool:
        return all(v in (0.0, 1.0) for e in self.entries for v in e.output)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "arity": self.input_arity,
            "selection": self.selection.value,
            "epsilon": self.epsilon,
            "entries": [
                {
                    "pattern": "".join(map(str, e.pattern)),
                    "output": list(e.output),
                    "weight": e.weight,
                }
                for e in self.entries
            ],
        }


def rule_table(
    rules: Dict[str, Sequence[float]],
    selection: Selection = Selection.GREEDY,
    epsilon: float = 0.0,
) -> BinaryRuleTable:
    """Build a one-entry-per-pattern table from {"01": output} pairs."""
    arities = {len(p) for p in rules}
    if len(arities) != 1:
        raise ConfigError("All rule patterns must have the same length")
    arity = arities.pop()
    entries = []
    for pattern, output in sorted(rules.items()):
        out = tuple(float(v) for v in np.atleast_1d(output))
        entries.append(RuleEntry(tuple(int(c) for c in pattern), out, 1.0))
    return BinaryRuleTable(arity, tuple(entries), selection, epsilon)


def identity_table() -> BinaryRuleTable:
    return rule_table({"0": [0.0], "1": [1.0]})


def not_table() -> BinaryRuleTable:
    return rule_table({"0": [1.0], "1": [0.0]})


def and_table(arity: int = 2) -> BinaryRuleTable:
    rules = {}
    for bits in itertools.product((0, 1), repeat=arity):
        rules["".join(map(str, bits))] = [1.0 if all(bits) else 0.0]
    return rule_table(rules)


def constant_table(value: Sequence[float]) -> BinaryRuleTable:
    """Arity-0 table that always emits `value`."""
    return BinaryRuleTable(0, (RuleEntry((), tuple(float(v) for v in value), 1.0),))


@dataclass(frozen=True, eq=False)
class MatchedFilterBank(TransferFn):
    """
    Linear, time-invariant matched filters, one template per symbol.

    `response` mode emits the largest correlation; `argmax` mode emits the
    label of the best-matching template (first on ties).
    """

    templates: np.ndarray
    labels: Tuple[float, ...] = ()
    mode: str = "response"

    kind = TransferKind.MATCHED_FILTER_BANK

    def __post_init__(self):
        arr = np.asarray(self.templates, dtype=float)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1)
        if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
            raise ConfigError("Matched filter templates must be a non-empty matrix")
        if not np.all(np.isfinite(arr)):
            raise ConfigError("Matched filter templates must be finite")
        if self.mode not in ("response", "argmax"):
            raise ConfigError(f"Unknown matched filter mode {self.mode!r}")
        labels = tuple(float(v) for v in self.labels) or tuple(float(i) for i in range(arr.shape[0]))
        if len(labels) != arr.shape[0]:
            raise ConfigError("One label per template is required")
        arr.setflags(write=False)
        object.__setattr__(self, "templates", arr)
        object.__setattr__(self, "labels", labels)

    @property
    def arity(self) -> int:
        return self.templates.shape[1]

    @property
    def output_dim(self) -> int:
        return 1

    def correlations(self, n: np.ndarray) -> np.ndarray:
        return self.templates @ np.asarray(n, dtype=float)

    def evaluate(self, n: np.ndarray, rng: np.random.Generator) -> Tuple[np.ndarray, Optional[int]]:
        corr = self.correlations(n)
        best = int(np.argmax(corr))
        if self.mode == "argmax":
            return np.array([self.labels[best]]), best
        return np.array([corr[best]]), best

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, MatchedFilterBank):
            return NotImplemented
        return self.serialize() == other.serialize()

    def __hash__(self) -> int:
        return hash(self.serialize())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "templates": self.templates.tolist(),
            "labels": list(self.labels),
            "mode": self.mode,
        }


@dataclass(frozen=True, eq=False)
class TabulatedNonlinear(TransferFn):
    """Piecewise-linear curve read at w·n, clamped at both table ends."""

    weights: np.ndarray
    grid: np.ndarray
    values: np.ndarray

    kind = TransferKind.TABULATED_NONLINEAR

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        xs = np.asarray(self.grid, dtype=float).reshape(-1)
        ys = np.asarray(self.values, dtype=float).reshape(-1)
        if xs.size == 0 or xs.size != ys.size:
            raise ConfigError("Tabulated grid and values must be non-empty and equal length")
        if np.any(np.diff(xs) <= 0):
            raise ConfigError("Tabulated grid must be strictly increasing")
        if not (np.all(np.isfinite(w)) and np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
            raise ConfigError("Tabulated parameters must be finite")
        for name, arr in (("weights", w), ("grid", xs), ("values", ys)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def arity(self) -> int:
        return self.weights.size

    @property
    def output_dim(self) -> int:
        return 1

    def evaluate(self, n: np.ndarray, rng: np.random.Generator) -> Tuple[np.ndarray, Optional[int]]:
        x = float(self.weights @ np.asarray(n, dtype=float)) if self.arity else 0.0
        return np.array([np.interp(x, self.grid, self.values)]), None

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, TabulatedNonlinear):
            return NotImplemented
        return self.serialize() == other.serialize()

    def __hash__(self) -> int:
        return hash(self.serialize())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "weights": self.weights.tolist(),
            "grid": self.grid.tolist(),
            "values": self.values.tolist(),
        }


def transfer_from_dict(data: Dict[str, Any]) -> TransferFn:
    """Rebuild a transfer function from `to_dict` output or a config block."""
    kind = data.get("kind")
    try:
        if kind == TransferKind.BINARY_RULE_TABLE.value:
            if "rules" in data:
                return rule_table(
                    data["rules"],
                    Selection(data.get("selection", "greedy")),
                    float(data.get("epsilon", 0.0)),
                )
            entries = tuple(
                RuleEntry(
                    tuple(int(c) for c in str(e.get("pattern", ""))),
                    tuple(float(v) for v in np.atleast_1d(e["output"])),
                    float(e.get("weight", 1.0)),
                )
                for e in data["entries"]
            )
            return BinaryRuleTable(
                int(data["arity"]),
                entries,
                Selection(data.get("selection", "greedy")),
                float(data.get("epsilon", 0.0)),
            )
        if kind == TransferKind.MATCHED_FILTER_BANK.value:
            return MatchedFilterBank(
                np.asarray(data["templates"], dtype=float),
                tuple(data.get("labels", ())),
                data.get("mode", "response"),
            )
        if kind == TransferKind.TABULATED_NONLINEAR.value:
            return TabulatedNonlinear(
                np.asarray(data.get("weights", []), dtype=float),
                np.asarray(data["grid"], dtype=float),
                np.asarray(data["values"], dtype=float),
            )
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"Invalid {kind} parameters", error=str(e))
    raise ConfigError(f"Unknown transfer kind {kind!r}")
