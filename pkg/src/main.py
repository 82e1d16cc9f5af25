#!/usr/bin/env python3
"""
MaTIC - Main Entry Point

Runs the `matic` command-line interface from a source checkout.
"""

import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

import structlog  # noqa: E402

from matic.cli import cli  # noqa: E402

logger = structlog.get_logger(__name__)


def main():
    """Main entry point."""
    try:
        cli(prog_name="matic")
    except KeyboardInterrupt:
        logger.info("Run interrupted by user")
        sys.exit(130)


if __name__ == "__main__":
    main()
