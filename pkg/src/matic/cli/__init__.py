"""Command-line interface for MaTIC."""

from .main import cli

__all__ = ["cli"]
