"""
Metrics collection for MaTIC runs.

Collects tabular metric rows, counters and timers for one run and writes
them as `metrics.csv`, `summary.json` and `timing.json`.
"""

import json
import math
import threading
import time
from collections import defaultdict
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Union

import numpy as np
import pandas as pd
import structlog

logger = structlog.get_logger(__name__)

FLOAT_FORMAT = "%.12g"


def normalise(value: Any) -> Any:
    """
    Make a value JSON-stable: numpy scalars become Python numbers, floats are
    rounded to 12 significant digits, non-finite floats become strings.
    """
    if isinstance(value, Mapping):
        return {str(k): normalise(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value, key=str) if isinstance(value, (set, frozenset)) else value
        return [normalise(v) for v in items]
    if isinstance(value, np.ndarray):
        return [normalise(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return str(value)
        return float(FLOAT_FORMAT % value)
    return value


def dump_json(data: Any) -> str:
    """Canonical JSON text: sorted keys, normalised floats, trailing newline."""
    return json.dumps(normalise(data), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


class MetricsCollector:
    """Per-run metrics collector."""

    def __init__(self, command: str, header: Sequence[str]):
        """
        Initialize metrics collector.

        Args:
            command: Subcommand the metrics belong to
            header: Column names of metrics.csv, in order
        """
        self.command = command
        self.header = list(header)
        self.metrics_lock = threading.Lock()
        self.rows: List[Dict[str, Any]] = []
        self.counters: Dict[str, int] = defaultdict(int)
        self.timers: Dict[str, float] = {}
        self._started: Dict[str, float] = {}

    def record_row(self, row: Mapping[str, Any]) -> None:
        unknown = set(row) - set(self.header)
        if unknown:
            raise KeyError(f"Columns not in the {self.command} header: {sorted(unknown)}")
        with self.metrics_lock:
            self.rows.append(dict(row))

    def record_rows(self, rows: Sequence[Mapping[str, Any]]) -> None:
        for row in rows:
            self.record_row(row)

    def increment(self, name: str, amount: int = 1) -> None:
        with self.metrics_lock:
            self.counters[name] += amount

    def start_timer(self, name: str) -> None:
        self._started[name] = time.perf_counter()

    def stop_timer(self, name: str) -> float:
        elapsed = time.perf_counter() - self._started.pop(name)
        with self.metrics_lock:
            self.timers[name] = self.timers.get(name, 0.0) + elapsed
        return elapsed

    def frame(self) -> pd.DataFrame:
        with self.metrics_lock:
            return pd.DataFrame(self.rows, columns=self.header)

    def write_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        self.frame().to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        logger.debug("Metrics written", path=str(path), rows=len(self.rows))
        return path

    def write_summary(self, path: Union[str, Path], summary: Mapping[str, Any]) -> Path:
        path = Path(path)
        path.write_text(dump_json(summary), encoding="utf-8")
        return path

    def write_timing(self, path: Union[str, Path], extra: Optional[Mapping[str, Any]] = None) -> Path:
        """Wall-clock timers and counters; never part of summary.json."""
        path = Path(path)
        data = {"command": self.command, "timers_s": dict(self.timers), "counters": dict(self.counters)}
        data.update(extra or {})
        path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return path

    def get_summary(self) -> Dict[str, Any]:
        with self.metrics_lock:
            return {"command": self.command, "rows": len(self.rows), "counters": dict(sorted(self.counters.items()))}
