"""
Run Manager for MaTIC.

Drives one subcommand run through its states and writes the run artifacts:
metrics.csv, summary.json and timing.json (plus any task artifacts).
"""

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

import structlog

from matic import __version__
from matic.config import Settings, get_settings
from matic.errors import ConfigError, InternalError, MaticError
from matic.monitoring import MetricsCollector, dump_json

from .manifest import RunManifest
from .tasks import TASKS, RunContext, Task, TaskResult

logger = structlog.get_logger(__name__)


class RunState(Enum):
    """Run states for tracking progression."""

    INITIALIZED = "initialized"
    LOADED = "loaded"
    COMPUTED = "computed"
    WRITTEN = "written"
    COMPLETED = "completed"
    FAILED = "failed"


@dataclass
class RunOutcome:
    exit_code: int
    state: RunState
    summary: Dict[str, Any]
    files: Dict[str, Path] = field(default_factory=dict)
    error: Optional[MaticError] = None

    @property
    def ok(self) -> bool:
        return self.exit_code == 0


class RunManager:
    """Manages run states and transitions for one manifest."""

    state_transitions = {
        RunState.INITIALIZED: [RunState.LOADED, RunState.FAILED],
        RunState.LOADED: [RunState.COMPUTED, RunState.FAILED],
        RunState.COMPUTED: [RunState.WRITTEN, RunState.FAILED],
        RunState.WRITTEN: [RunState.COMPLETED, RunState.FAILED],
        RunState.COMPLETED: [],
        RunState.FAILED: [],
    }

    def __init__(self, manifest: RunManifest, settings: Optional[Settings] = None):
        self.manifest = manifest
        self.settings = settings or get_settings()
        self.state = RunState.INITIALIZED
        self.steps: List[Dict[str, Any]] = []
        self.task: Optional[Task] = None
        self.collector: Optional[MetricsCollector] = None
        logger.info(
            "RunManager initialized",
            command=manifest.command,
            seed=manifest.seed,
            out_dir=str(manifest.out_dir),
        )

    def transition_state(self, new_state: RunState, step_name: str) -> None:
        """
        Move the run to a new state.

        Raises:
            InternalError: if the transition is not allowed from the current state
        """
        if new_state not in self.state_transitions[self.state]:
            logger.error("Invalid state transition", current_state=self.state.value, new_state=new_state.value)
            raise InternalError(f"Invalid run transition {self.state.value} -> {new_state.value}")
        logger.debug("State transition", from_state=self.state.value, to_state=new_state.value, step=step_name)
        self.steps.append({"name": step_name, "state": new_state.value})
        self.state = new_state

    def load(self) -> Task:
        task = TASKS.get(self.manifest.command)
        if task is None:
            raise ConfigError(f"Unknown command {self.manifest.command!r}", known=", ".join(sorted(TASKS)))
        missing = self.manifest.missing_inputs()
        if missing:
            name, path = next(iter(missing.items()))
            raise ConfigError(f"Input file not found: {path}", input=name, path=str(path))
        self.task = task
        self.collector = MetricsCollector(task.name, task.header)
        self.transition_state(RunState.LOADED, "inputs_checked")
        return task

    def compute(self) -> TaskResult:
        assert self.task is not None and self.collector is not None
        self.collector.start_timer("compute")
        outcome = self.task.fn(RunContext(self.manifest, self.settings))
        self.collector.stop_timer("compute")
        self.collector.record_rows(outcome.rows)
        self.transition_state(RunState.COMPUTED, "task_computed")
        return outcome

    def summary(self, result: Dict[str, Any], error: Optional[MaticError] = None) -> Dict[str, Any]:
        summary: Dict[str, Any] = {
            "schema_version": self.settings.schema_version,
            "command": self.manifest.command,
            "version": __version__,
            "seed": self.manifest.seed,
            "params": self.manifest.params,
            "inputs": {name: str(path) for name, path in sorted(self.manifest.inputs.items())},
            "status": "failed" if error else "ok",
            "result": result,
        }
        if error is not None:
            summary["error"] = error.to_dict()
        return summary

    def write(self, outcome: TaskResult) -> Dict[str, Path]:
        assert self.collector is not None
        out_dir = Path(self.manifest.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        files = {
            "metrics": self.collector.write_csv(out_dir / "metrics.csv"),
            "summary": self.collector.write_summary(out_dir / "summary.json", self.summary(outcome.result)),
        }
        for name, document in sorted(outcome.artifacts.items()):
            path = out_dir / name
            path.write_text(dump_json(document), encoding="utf-8")
            files[name] = path
        files["timing"] = self.collector.write_timing(out_dir / "timing.json")
        self.transition_state(RunState.WRITTEN, "artifacts_written")
        return files

    def fail(self, error: MaticError) -> RunOutcome:
        if self.state is not RunState.FAILED:
            self.transition_state(RunState.FAILED, "run_failed")
        summary = self.summary({}, error)
        files: Dict[str, Path] = {}
        try:
            out_dir = Path(self.manifest.out_dir)
            out_dir.mkdir(parents=True, exist_ok=True)
            path = out_dir / "summary.json"
            path.write_text(dump_json(summary), encoding="utf-8")
            files["summary"] = path
        except OSError as e:
            logger.warning("Could not write failure summary", error=str(e))
        logger.error("Run failed", command=self.manifest.command, category=error.category, error=error.message)
        return RunOutcome(error.exit_code, self.state, summary, files, error)

    def execute(self) -> RunOutcome:
        try:
            self.load()
            outcome = self.compute()
            files = self.write(outcome)
            self.transition_state(RunState.COMPLETED, "run_completed")
        except MaticError as e:
            return self.fail(e)
        except Exception as e:  # noqa: BLE001
            logger.exception("Unexpected failure", command=self.manifest.command)
            return self.fail(InternalError(f"Unexpected {type(e).__name__}: {e}"))
        logger.info("Run completed", command=self.manifest.command, rows=len(outcome.rows), files=len(files))
        return RunOutcome(0, self.state, self.summary(outcome.result), files)


def run(manifest: RunManifest, settings: Optional[Settings] = None) -> RunOutcome:
    """
    Execute one run.

    Args:
        manifest: Validated run manifest
        settings: Resolved settings (process settings when None)

    Returns:
        Outcome with the exit code (0, or the error category's code)
    """
    return RunManager(manifest, settings).execute()


def read_summary(out_dir: Path) -> Dict[str, Any]:
    with open(Path(out_dir) / "summary.json", "r", encoding="utf-8") as f:
        return json.load(f)
