"""
Run manifests: everything one CLI invocation needs to reproduce its results.
"""

from pathlib import Path
from typing import Any, Dict, Literal

from pydantic import BaseModel, Field, ValidationError

from matic.errors import ConfigError

MAX_SEED = 2**64 - 1


class RunManifest(BaseModel):
    """
    One run of one subcommand.

    `inputs` names the files the command reads (trace, corpus, model,
    scenario, ...); they must exist when the run starts. `params` holds the
    subcommand options and is echoed into summary.json.
    """

    command: str
    seed: int = Field(0, ge=0, le=MAX_SEED)
    out_dir: Path = Path("runs/latest")
    inputs: Dict[str, Path] = {}
    params: Dict[str, Any] = {}
    output_format: Literal["csv", "json"] = "json"

    def missing_inputs(self) -> Dict[str, Path]:
        return {name: path for name, path in sorted(self.inputs.items()) if not Path(path).exists()}


def build_manifest(**fields: Any) -> RunManifest:
    """Validate manifest fields, surfacing pydantic errors as ConfigError."""
    try:
        return RunManifest(**fields)
    except ValidationError as e:
        raise ConfigError("Invalid run manifest", error=str(e))
