"""
Logging setup for MaTIC.

structlog renders JSON lines through the stdlib logger; everything goes to
stderr so command output on stdout stays machine-readable.
"""

import logging
import os
import sys
from typing import Optional

import structlog

LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def configure_logging(level: Optional[str] = None) -> str:
    """
    Configure structlog and the root stdlib logger.

    Args:
        level: Log level name; falls back to MATIC_LOG, then WARNING

    Returns:
        The level actually applied
    """
    name = (level or os.getenv("MATIC_LOG") or "WARNING").upper()
    if name not in LEVELS:
        name = "WARNING"

    logging.basicConfig(
        level=getattr(logging, name),
        stream=sys.stderr,
        format="%(message)s",
        force=True,
    )

    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            structlog.processors.JSONRenderer(),
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )
    return name
