"""
Cognitive networks for MaTIC.

A network wires GCM outputs (and named external inputs) into the ports of
other GCMs. Fast-pathway edges are inhibitory and excitatory; reward and
learning edges feed the slow pathway.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

import structlog

from matic.errors import ArityMismatch, ConfigError, UnknownNode
from matic.gcm import Gcm

logger = structlog.get_logger(__name__)


class PortKind(Enum):
    INHIBITORY = "inhibitory"
    EXCITATORY = "excitatory"
    REWARD = "reward"
    LEARNING = "learning"

    @property
    def port(self) -> str:
        return {"inhibitory": "p", "excitatory": "n", "reward": "r", "learning": "l"}[self.value]

    @property
    def is_fast(self) -> bool:
        return self in (PortKind.INHIBITORY, PortKind.EXCITATORY)


@dataclass(frozen=True)
class Edge:
    """source output (or external input) -> target port; `lines` selects source lines."""

    source: str
    target: str
    kind: PortKind
    lines: Optional[Tuple[int, ...]] = None


class Network:
    """
    Directed, port-wired graph of GCMs.

    Lines feeding one port are concatenated in edge order and must add up to
    the port's declared line count.
    """

    def __init__(
        self,
        nodes: Mapping[str, Gcm],
        edges: Iterable[Edge],
        external_inputs: Optional[Mapping[str, int]] = None,
    ):
        self.nodes: Dict[str, Gcm] = dict(nodes)
        self.edges: List[Edge] = list(edges)
        self.external_inputs: Dict[str, int] = dict(external_inputs or {})
        self._validate()
        logger.debug(
            "Network built",
            nodes=len(self.nodes),
            edges=len(self.edges),
            external_inputs=len(self.external_inputs),
        )

    def _source_width(self, source: str) -> int:
        if source in self.nodes:
            return self.nodes[source].output_dim
        if source in self.external_inputs:
            return self.external_inputs[source]
        raise UnknownNode(f"Edge source {source!r} is neither a node nor an external input", node=source)

    def edge_width(self, edge: Edge) -> int:
        width = self._source_width(edge.source)
        if edge.lines is None:
            return width
        for i in edge.lines:
            if not 0 <= i < width:
                raise ConfigError(
                    f"Edge {edge.source}->{edge.target} selects line {i} of a {width}-line source"
                )
        return len(edge.lines)

    def _validate(self):
        clash = set(self.nodes) & set(self.external_inputs)
        if clash:
            raise ConfigError("Node ids and external input names overlap", names=sorted(clash))
        for name, width in self.external_inputs.items():
            if width < 0:
                raise ConfigError(f"External input {name!r} has negative width")
        fed: Dict[Tuple[str, PortKind], int] = {}
        for edge in self.edges:
            if edge.target not in self.nodes:
                raise UnknownNode(f"Edge target {edge.target!r} is not a node", node=edge.target)
            declared = getattr(self.nodes[edge.target].ports, edge.kind.port)
            if declared == 0:
                raise ConfigError(
                    f"Node {edge.target!r} declares no {edge.kind.value} port",
                    node=edge.target,
                )
            key = (edge.target, edge.kind)
            fed[key] = fed.get(key, 0) + self.edge_width(edge)
        for node_id, gcm in self.nodes.items():
            for kind in PortKind:
                declared = getattr(gcm.ports, kind.port)
                got = fed.get((node_id, kind), 0)
                if got and got != declared:
                    raise ArityMismatch(
                        f"Node {node_id!r} {kind.value} port has {declared} lines, edges feed {got}",
                        node=node_id,
                    )

    def inbound(self, node_id: str, kind: Optional[PortKind] = None) -> List[Edge]:
        return [
            e for e in self.edges if e.target == node_id and (kind is None or e.kind is kind)
        ]

    def fast_edges(self) -> List[Edge]:
        return [e for e in self.edges if e.kind.is_fast]

    def require(self, node_id: str) -> Gcm:
        if node_id not in self.nodes:
            raise UnknownNode(f"Unknown node {node_id!r}", node=node_id)
        return self.nodes[node_id]
