"""
Cognitive network package for MaTIC.
"""

from .analysis import CircularityVerdict, detect_circularity, fast_graph, stratify_network
from .io import network_from_dict, stimuli_from_dict
from .network import Edge, Network, PortKind
from .predicates import (
    Predicate,
    Stimulus,
    cardinality,
    member,
    member_alpha,
    predicate_complement,
    predicate_equiv,
    predicate_intersection,
    predicate_not_equiv,
    predicate_of,
    predicate_union,
)
from .runner import NetworkRun, NetworkRunner, run_network
from .selection import build_selection_network, is_binary_agent

__all__ = [
    "CircularityVerdict",
    "detect_circularity",
    "fast_graph",
    "stratify_network",
    "network_from_dict",
    "stimuli_from_dict",
    "Edge",
    "Network",
    "PortKind",
    "Predicate",
    "Stimulus",
    "cardinality",
    "member",
    "member_alpha",
    "predicate_complement",
    "predicate_equiv",
    "predicate_intersection",
    "predicate_not_equiv",
    "predicate_of",
    "predicate_union",
    "NetworkRun",
    "NetworkRunner",
    "run_network",
    "build_selection_network",
    "is_binary_agent",
]
