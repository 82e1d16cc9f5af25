"""
Event model package for MaTIC.
"""

from .model import (
    Chain,
    ChainStatus,
    ChainVerdict,
    Event,
    Trace,
    candidate_causes,
    context_of,
    predecessors,
    validate_chain,
)
from .selectors import ContextSelector, ExplicitSelector, WindowSelector, selector_from_spec

__all__ = [
    "Chain",
    "ChainStatus",
    "ChainVerdict",
    "Event",
    "Trace",
    "candidate_causes",
    "context_of",
    "predecessors",
    "validate_chain",
    "ContextSelector",
    "ExplicitSelector",
    "WindowSelector",
    "selector_from_spec",
]
