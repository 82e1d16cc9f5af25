"""
Monitoring package for MaTIC: logging setup and run metrics.
"""

from .log_config import configure_logging
from .metrics import MetricsCollector, dump_json, normalise

__all__ = ["configure_logging", "MetricsCollector", "dump_json", "normalise"]
