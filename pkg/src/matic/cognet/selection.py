"""
Selection realised with GCMs: the predicate X ∩ Y built from two modules.

`gate` mode feeds the inverted output of X into an inhibitory line of Y, so
Y only answers inside the domain of X. `conjunction` mode adds a third module
that combines both outputs.
"""

import dataclasses
from typing import Tuple

from matic.errors import ConfigError
from matic.gcm import Gcm, Ports, and_table, not_table

from .network import Edge, Network, PortKind

STIMULUS = "stimulus"


def build_selection_network(gx: Gcm, gy: Gcm, mode: str = "gate") -> Tuple[Network, str]:
    """
    Wire X and Y so that one node outputs their intersection.

    Both modules read the same external `stimulus` input.

    Args:
        gx: Module whose output is the predicate X
        gy: Module whose output is the predicate Y
        mode: "gate" or "conjunction"

    Returns:
        The network and the id of its output node
    """
    if gx.ports.n != gy.ports.n:
        raise ConfigError("X and Y must read stimuli of the same width")
    if gx.output_dim != 1 or gy.output_dim != 1:
        raise ConfigError("X and Y must have a single output line")
    width = gx.ports.n
    if mode == "gate":
        if gy.ports.p != 0:
            raise ConfigError("Y must not declare inhibitory lines in gate mode")
        gated_y = dataclasses.replace(gy, ports=dataclasses.replace(gy.ports, p=1))
        nodes = {
            "X": gx,
            "notX": Gcm(not_table(), ports=Ports(n=1)),
            "Y": gated_y,
        }
        edges = [
            Edge(STIMULUS, "X", PortKind.EXCITATORY),
            Edge("X", "notX", PortKind.EXCITATORY),
            Edge("notX", "Y", PortKind.INHIBITORY),
            Edge(STIMULUS, "Y", PortKind.EXCITATORY),
        ]
        return Network(nodes, edges, {STIMULUS: width}), "Y"
    if mode == "conjunction":
        nodes = {"X": gx, "Y": gy, "XandY": Gcm(and_table(2), ports=Ports(n=2))}
        edges = [
            Edge(STIMULUS, "X", PortKind.EXCITATORY),
            Edge(STIMULUS, "Y", PortKind.EXCITATORY),
            Edge("X", "XandY", PortKind.EXCITATORY),
            Edge("Y", "XandY", PortKind.EXCITATORY),
        ]
        return Network(nodes, edges, {STIMULUS: width}), "XandY"
    raise ConfigError(f"Unknown selection mode {mode!r}")


def is_binary_agent(net: Network) -> bool:
    """True when every node is a rule table with 0/1 outputs."""
    return all(gcm.transfer.is_binary() for gcm in net.nodes.values())
