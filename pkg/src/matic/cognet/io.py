"""
Network files: {"external_inputs": {name: width}, "nodes": [{"id", ...gcm
config}], "edges": [{"from", "to", "kind", "lines"}]}.
"""

from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, ValidationError

from matic.errors import ConfigError
from matic.gcm import Signal, gcm_from_dict

from .network import Edge, Network, PortKind
from .predicates import Stimulus


class EdgeRecord(BaseModel):
    source: str = Field(alias="from")
    target: str = Field(alias="to")
    kind: PortKind = PortKind.EXCITATORY
    lines: Optional[List[int]] = None


class NetworkRecord(BaseModel):
    external_inputs: Dict[str, int] = {}
    nodes: List[Dict[str, Any]]
    edges: List[EdgeRecord] = []


def network_from_dict(data: Dict[str, Any]) -> Network:
    try:
        record = NetworkRecord.model_validate(data)
    except ValidationError as e:
        raise ConfigError("Invalid network file", error=str(e))
    nodes = {}
    for node in record.nodes:
        node = dict(node)
        node_id = node.pop("id", None)
        if not node_id:
            raise ConfigError("Every network node needs an id")
        if node_id in nodes:
            raise ConfigError(f"Duplicate node id {node_id!r}")
        nodes[node_id] = gcm_from_dict(node)
    edges = [
        Edge(e.source, e.target, e.kind, None if e.lines is None else tuple(e.lines))
        for e in record.edges
    ]
    return Network(nodes, edges, record.external_inputs)


class StimulusRecord(BaseModel):
    event: str
    inputs: Dict[str, List[List[float]]] = {}


class StimuliRecord(BaseModel):
    node: str
    crisp: bool = False
    stimuli: List[StimulusRecord]


def stimuli_from_dict(data: Dict[str, Any], net: Network) -> Tuple[str, bool, List[Stimulus]]:
    """Parse {"node", "crisp", "stimuli": [{"event", "inputs": {name: rows}}]}."""
    try:
        record = StimuliRecord.model_validate(data)
    except ValidationError as e:
        raise ConfigError("Invalid stimuli file", error=str(e))
    stimuli = []
    for item in record.stimuli:
        unknown = sorted(set(item.inputs) - set(net.external_inputs))
        if unknown:
            raise ConfigError(f"Stimulus {item.event!r} feeds unknown inputs", inputs=unknown)
        inputs = {
            name: Signal.from_rows(rows, net.external_inputs[name]) for name, rows in item.inputs.items()
        }
        stimuli.append(Stimulus(item.event, inputs))
    return record.node, record.crisp, stimuli
