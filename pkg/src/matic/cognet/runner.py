"""
Tick-by-tick evaluation of acyclic cognitive networks.

Fast outputs are computed in topological order; slow updates run at the end
of every K-th tick, once every output of that tick is known.
"""

import dataclasses
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np
import structlog

from matic.errors import CircularSystem, DataError, LengthMismatch
from matic.gcm import Gcm, Signal, step_fast, step_slow

from .analysis import detect_circularity
from .network import Network, PortKind

logger = structlog.get_logger(__name__)

# (source, line selection or None)
_Feed = List[Tuple[str, Optional[np.ndarray]]]


@dataclass
class NetworkRun:
    outputs: Dict[str, Signal]
    nodes: Dict[str, Gcm]


class NetworkRunner:
    """
    Stateful evaluator for one run of a network.

    Each node owns a generator derived from (run seed, node position, node
    seed), so nodes never share random streams.
    """

    def __init__(self, net: Network, seed: int = 0, slow_period: int = 10):
        verdict = detect_circularity(net)
        if not verdict.acyclic:
            raise CircularSystem(
                f"Cannot evaluate a circular system: {verdict.render_cycle()}",
                cycle=list(verdict.cycle),
            )
        self.net = net
        self.order = verdict.order
        self.slow_period = slow_period
        self.tick = 0
        self.nodes: Dict[str, Gcm] = {
            node_id: dataclasses.replace(gcm, last_fired=None) for node_id, gcm in net.nodes.items()
        }
        positions = {node_id: i for i, node_id in enumerate(net.nodes)}
        self.rngs = {
            node_id: np.random.default_rng([seed, positions[node_id], gcm.rng_seed])
            for node_id, gcm in net.nodes.items()
        }
        self._feeds: Dict[Tuple[str, PortKind], _Feed] = {}
        for node_id in net.nodes:
            for kind in PortKind:
                self._feeds[(node_id, kind)] = [
                    (e.source, None if e.lines is None else np.array(e.lines, dtype=int))
                    for e in net.inbound(node_id, kind)
                ]

    def _gather(self, node_id: str, kind: PortKind, values: Mapping[str, np.ndarray]) -> np.ndarray:
        lines = getattr(self.nodes[node_id].ports, kind.port)
        feeds = self._feeds[(node_id, kind)]
        if not feeds:
            return np.zeros(lines)
        parts = [values[src] if sel is None else values[src][sel] for src, sel in feeds]
        return parts[0] if len(parts) == 1 else np.concatenate(parts)

    def step(self, external: Mapping[str, np.ndarray]) -> Dict[str, np.ndarray]:
        """
        Advance one tick.

        Args:
            external: Current value of every external input

        Returns:
            Output vector of every node for this tick
        """
        values: Dict[str, np.ndarray] = {}
        for name, width in self.net.external_inputs.items():
            if name not in external:
                raise DataError(f"Missing external input {name!r}", input=name)
            values[name] = np.asarray(external[name], dtype=float).reshape(width)
        outputs: Dict[str, np.ndarray] = {}
        for node_id in self.order:
            gcm = self.nodes[node_id]
            p = self._gather(node_id, PortKind.INHIBITORY, values)
            n = self._gather(node_id, PortKind.EXCITATORY, values)
            out = step_fast(gcm, p, n, self.rngs[node_id])
            values[node_id] = out
            outputs[node_id] = out
        self.tick += 1
        if self.tick % self.slow_period == 0:
            for node_id in self.order:
                gcm = self.nodes[node_id]
                if gcm.ports.l == 0:
                    continue
                l = self._gather(node_id, PortKind.LEARNING, values)
                r = self._gather(node_id, PortKind.REWARD, values)
                self.nodes[node_id] = step_slow(gcm, l, r)
        return outputs


def run_network(
    net: Network,
    inputs: Mapping[str, Signal],
    ticks: int,
    seed: int = 0,
    slow_period: int = 10,
) -> NetworkRun:
    """
    Run a network over recorded external input signals.

    Args:
        net: Acyclic network
        inputs: One signal per external input, each at least `ticks` long
        ticks: Number of ticks
        seed: Run seed
        slow_period: K, ticks between slow-pathway updates

    Returns:
        Output signal of every node and the final node states
    """
    for name, width in net.external_inputs.items():
        if name not in inputs:
            raise DataError(f"Missing external input {name!r}", input=name)
        if inputs[name].ticks < ticks:
            raise LengthMismatch(f"Input {name!r} is shorter than {ticks} ticks", input=name)
    runner = NetworkRunner(net, seed=seed, slow_period=slow_period)
    traces = {node_id: np.zeros((ticks, gcm.output_dim)) for node_id, gcm in net.nodes.items()}
    for t in range(ticks):
        outputs = runner.step({name: inputs[name].at(t) for name in net.external_inputs})
        for node_id, out in outputs.items():
            traces[node_id][t] = out
    return NetworkRun({k: Signal(v) for k, v in traces.items()}, runner.nodes)
