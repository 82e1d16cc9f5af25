"""
Run orchestration for MaTIC: manifests, run states and subcommand tasks.
"""

from .manifest import MAX_SEED, RunManifest, build_manifest
from .run_manager import RunManager, RunOutcome, RunState, read_summary, run
from .tasks import TASKS, RunContext, Task, TaskResult

__all__ = [
    "MAX_SEED",
    "RunManifest",
    "build_manifest",
    "RunManager",
    "RunOutcome",
    "RunState",
    "read_summary",
    "run",
    "TASKS",
    "RunContext",
    "Task",
    "TaskResult",
]
