"""
Signals for MaTIC.

A signal is one real vector per tick; o(t), p(t), n(t), r(t) and l(t) are
all signals.
"""

from dataclasses import dataclass
from typing import Any, Optional, Sequence

import numpy as np

from matic.errors import DataError


@dataclass(frozen=True, eq=False)
class Signal:
    """Values of shape (ticks, dim); dim may be 0 for an unused port."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1)
        if arr.ndim != 2:
            raise DataError("Signal values must be a (ticks, dim) array", shape=arr.shape)
        if not np.all(np.isfinite(arr)):
            raise DataError("Signal values must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @classmethod
    def zeros(cls, ticks: int, dim: int) -> "Signal":
        return cls(np.zeros((ticks, dim)))

    @classmethod
    def constant(cls, vector: Sequence[float], ticks: int) -> "Signal":
        vec = np.asarray(vector, dtype=float).reshape(1, -1)
        return cls(np.repeat(vec, ticks, axis=0))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]], dim: Optional[int] = None) -> "Signal":
        if len(rows) == 0:
            return cls.zeros(0, dim or 0)
        if all(len(row) == 0 for row in rows):
            return cls.zeros(len(rows), 0)
        return cls(np.asarray(rows, dtype=float).reshape(len(rows), -1))

    @property
    def ticks(self) -> int:
        return self.values.shape[0]

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    def __len__(self) -> int:
        return self.ticks

    def at(self, t: int) -> np.ndarray:
        return self.values[t]

    def mean(self) -> np.ndarray:
        if self.ticks == 0:
            return np.zeros(self.dim)
        return self.values.mean(axis=0)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, Signal):
            return NotImplemented
        return self.values.shape == other.values.shape and bool(np.array_equal(self.values, other.values))

    def to_list(self):
        return self.values.tolist()


@dataclass(frozen=True)
class SignalBundle:
    """Inputs of one GCM; a missing port reads as zeros."""

    p: Optional[Signal] = None
    n: Optional[Signal] = None
    r: Optional[Signal] = None
    l: Optional[Signal] = None
