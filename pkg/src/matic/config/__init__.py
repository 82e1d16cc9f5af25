"""
Configuration package for MaTIC.
"""

from .settings import PROJECT_ROOT, Settings, get_settings, load_settings, resolve_path

__all__ = ["PROJECT_ROOT", "Settings", "get_settings", "load_settings", "resolve_path"]
