"""
Circularity detection and stratification levels for cognitive networks.

Only fast-pathway edges count: slow-pathway feedback (reward, learning) is
allowed to close loops.
"""

from dataclasses import dataclass
from typing import Dict, Tuple

import networkx as nx
import structlog

from matic.errors import CircularSystem

from .network import Network

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class CircularityVerdict:
    acyclic: bool
    order: Tuple[str, ...] = ()
    cycle: Tuple[str, ...] = ()

    def render_cycle(self) -> str:
        return "→".join(self.cycle)


def fast_graph(net: Network) -> nx.DiGraph:
    """Node-to-node graph of the fast pathway (external inputs left out)."""
    graph = nx.DiGraph()
    graph.add_nodes_from(net.nodes)
    for edge in net.fast_edges():
        if edge.source in net.nodes:
            graph.add_edge(edge.source, edge.target)
    return graph


def detect_circularity(net: Network) -> CircularityVerdict:
    """
    Decide whether any output can reach back into an input on the fast pathway.

    Args:
        net: Network to inspect

    Returns:
        Acyclic with a topological order, or Circular with a witness cycle
        listed as [n1, ..., n1]
    """
    graph = fast_graph(net)
    rank = {node: i for i, node in enumerate(net.nodes)}
    if nx.is_directed_acyclic_graph(graph):
        order = tuple(nx.lexicographical_topological_sort(graph, key=rank.__getitem__))
        return CircularityVerdict(True, order=order)
    cycle_edges = nx.find_cycle(graph)
    cycle = [u for u, _ in cycle_edges] + [cycle_edges[0][0]]
    logger.info("Circular system detected", cycle="→".join(cycle))
    return CircularityVerdict(False, cycle=tuple(cycle))


def stratify_network(net: Network) -> Dict[str, int]:
    """
    Level of every node: 1 + the highest level among its fast-pathway sources.

    External inputs sit at level 0, so a node fed only by them is at level 1.

    Raises:
        CircularSystem: if the fast pathway has a cycle
    """
    verdict = detect_circularity(net)
    if not verdict.acyclic:
        raise CircularSystem(
            f"Circular system: {verdict.render_cycle()}", cycle=list(verdict.cycle)
        )
    levels: Dict[str, int] = {}
    for node in verdict.order:
        sources = [
            levels[e.source] if e.source in net.nodes else 0
            for e in net.inbound(node)
            if e.kind.is_fast
        ]
        levels[node] = 1 + max(sources, default=0)
    return levels
