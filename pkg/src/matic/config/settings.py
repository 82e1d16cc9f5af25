"""
Settings for MaTIC.

Defaults live in `config/matic.yaml`; `.env` and `MATIC_*` environment
variables override them.
"""

import os
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Optional

import structlog
import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError

from matic.errors import ConfigError

logger = structlog.get_logger(__name__)

PROJECT_ROOT = Path(__file__).resolve().parents[3]
DEFAULT_CONFIG_PATH = PROJECT_ROOT / "config" / "matic.yaml"

# env var -> (section, key, caster)
ENV_OVERRIDES = {
    "MATIC_LOG": (None, "log_level", str),
    "MATIC_SLOW_PERIOD": ("gcm", "slow_period", int),
    "MATIC_MAX_CONTEXT": ("implicature", "max_context_size", int),
    "MATIC_SMOOTHING": ("implicature", "smoothing", float),
    "MATIC_TAU": ("infometrics", "stationarity_tau", float),
    "MATIC_THETA": ("cognet", "predicate_threshold", float),
    "MATIC_OUT": ("runs", "output_dir", str),
    "MATIC_MAX_WORKERS": ("runs", "max_workers", int),
}


class GcmSettings(BaseModel):
    slow_period: int = Field(10, ge=1)


class ImplicatureSettings(BaseModel):
    max_context_size: int = Field(3, ge=0)
    smoothing: float = Field(1.0, ge=0.0)


class InfometricsSettings(BaseModel):
    stationarity_tau: float = Field(0.05, gt=0.0)


class CognetSettings(BaseModel):
    predicate_threshold: float = Field(0.5, ge=0.0, le=1.0)


class ReceiverSettings(BaseModel):
    samples_per_symbol: int = Field(8, ge=1)


class RunSettings(BaseModel):
    output_dir: str = "runs/latest"
    scenarios_dir: str = "scenarios"
    max_workers: int = Field(4, ge=1)


class Settings(BaseModel):
    """Resolved MaTIC configuration."""

    log_level: str = "WARNING"
    schema_version: int = 1
    gcm: GcmSettings = GcmSettings()
    implicature: ImplicatureSettings = ImplicatureSettings()
    infometrics: InfometricsSettings = InfometricsSettings()
    cognet: CognetSettings = CognetSettings()
    receiver: ReceiverSettings = ReceiverSettings()
    runs: RunSettings = RunSettings()


def _read_yaml(path: Path) -> Dict[str, Any]:
    if not path.exists():
        return {}
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
    except yaml.YAMLError as e:
        raise ConfigError(f"Invalid YAML in {path}", error=str(e))
    if not isinstance(data, dict):
        raise ConfigError(f"Expected a mapping in {path}")
    return data


def _apply_env(data: Dict[str, Any]) -> Dict[str, Any]:
    for var, (section, key, caster) in ENV_OVERRIDES.items():
        raw = os.getenv(var)
        if raw is None or raw == "":
            continue
        try:
            value = caster(raw)
        except ValueError:
            raise ConfigError(f"Invalid value for {var}: {raw!r}")
        if section is None:
            data[key] = value
        else:
            data.setdefault(section, {})[key] = value
    return data


def load_settings(config_path: Optional[Path] = None) -> Settings:
    """
    Load settings from YAML, `.env` and the environment.

    Args:
        config_path: YAML file; defaults to `config/matic.yaml` (or MATIC_CONFIG)

    Returns:
        Validated settings
    """
    load_dotenv()
    path = config_path or Path(os.getenv("MATIC_CONFIG", str(DEFAULT_CONFIG_PATH)))
    data = _apply_env(_read_yaml(Path(path)))
    try:
        settings = Settings(**data)
    except ValidationError as e:
        raise ConfigError(f"Invalid settings in {path}", error=str(e))
    logger.debug("Settings loaded", path=str(path), log_level=settings.log_level)
    return settings


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Process-wide settings, loaded once."""
    return load_settings()


def resolve_path(path: str) -> Path:
    """Relative paths from the settings are read against the project root."""
    candidate = Path(path)
    return candidate if candidate.is_absolute() else PROJECT_ROOT / candidate
