"""
General Cognitive Module for MaTIC.

Fast pathway: o(t) = gate(p(t)) * h(n(t)) + noise.
Slow pathway: h' = m(l(t), r(t)), applied every K ticks.
"""

import dataclasses
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
import structlog

from matic.errors import ArityMismatch, ConfigError, LengthMismatch

from .metabolic import Frozen, MetabolicFn
from .signal import Signal, SignalBundle
from .transfer import TransferFn

logger = structlog.get_logger(__name__)

BASELINE = 0.0

# Environment hook for closed-loop runs: (tick, output) -> reward vector.
RewardFeedback = Callable[[int, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Ports:
    """Line counts of the four input ports. The output port is always single."""

    p: int = 0
    n: int = 0
    r: int = 0
    l: int = 0

    def __post_init__(self):
        for name in ("p", "n", "r", "l"):
            if getattr(self, name) < 0:
                raise ConfigError(f"Port count {name} must be non-negative")


@dataclass
class Gcm:
    """
    A two-pathway processing unit.

    Mutated only by the loop that owns it; `last_fired` remembers which rule
    entry produced the latest output for reward credit.
    """

    transfer: TransferFn
    metabolic: MetabolicFn = dataclasses.field(default_factory=Frozen)
    ports: Ports = dataclasses.field(default_factory=Ports)
    noise_var: float = 0.0
    rng_seed: int = 0
    last_fired: Optional[int] = None

    def __post_init__(self):
        if self.ports.n != self.transfer.arity:
            raise ConfigError(
                "Excitatory port count must match the transfer arity",
                ports=self.ports.n,
                arity=self.transfer.arity,
            )
        if self.noise_var < 0 or not np.isfinite(self.noise_var):
            raise ConfigError("Noise variance must be finite and non-negative")
        expected_r = self.metabolic.reward_ports(self.transfer)
        if expected_r is not None and self.ports.r != expected_r:
            raise ConfigError("Reward port count does not fit the metabolic kind", expected=expected_r)

    @property
    def output_dim(self) -> int:
        return self.transfer.output_dim

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.rng_seed)


def _check(vector: np.ndarray, expected: int, port: str) -> np.ndarray:
    arr = np.asarray(vector, dtype=float).reshape(-1)
    if arr.size != expected:
        raise ArityMismatch(f"Port {port} expects {expected} lines, got {arr.size}", port=port)
    return arr


def step_fast(gcm: Gcm, p: np.ndarray, n: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """
    One tick of the fast pathway.

    Any active (nonzero) inhibitory line vetoes the output to the baseline 0.

    Args:
        gcm: Module to step
        p: Inhibitory lines
        n: Excitatory lines
        rng: The module's own generator

    Returns:
        Output vector
    """
    p = _check(p, gcm.ports.p, "p")
    n = _check(n, gcm.ports.n, "n")
    if np.any(p != 0.0):
        out = np.full(gcm.output_dim, BASELINE)
        gcm.last_fired = None
    else:
        out, fired = gcm.transfer.evaluate(n, rng)
        gcm.last_fired = fired
    if gcm.noise_var > 0.0:
        out = out + rng.normal(0.0, np.sqrt(gcm.noise_var), size=out.shape)
    return out


def step_slow(gcm: Gcm, l: np.ndarray, r: np.ndarray) -> Gcm:
    """
    One slow-pathway update.

    Args:
        gcm: Module to update
        l: Learning lines
        r: Reward lines

    Returns:
        A module carrying h' = m(l, r); h is reused as-is when unchanged
    """
    l = _check(l, gcm.ports.l, "l")
    r = _check(r, gcm.ports.r, "r")
    updated = gcm.metabolic.apply(gcm.transfer, l, r, gcm.last_fired)
    if updated is gcm.transfer:
        return gcm
    return dataclasses.replace(gcm, transfer=updated)


def _port_signal(signal: Optional[Signal], lines: int, ticks: int, port: str) -> np.ndarray:
    if signal is None:
        return np.zeros((ticks, lines))
    if signal.ticks < ticks:
        raise LengthMismatch(
            f"Signal {port} has {signal.ticks} ticks, run needs {ticks}",
            port=port,
        )
    if signal.dim != lines:
        raise ArityMismatch(f"Signal {port} has dim {signal.dim}, port has {lines} lines", port=port)
    return signal.values


def simulate(
    gcm: Gcm,
    inputs: SignalBundle,
    ticks: int,
    slow_period: int = 10,
    feedback: Optional[RewardFeedback] = None,
) -> Tuple[Signal, Gcm]:
    """
    Tick loop behind `run_gcm`, also returning the final module.

    `feedback`, when given, supplies r(t) from the output of the same tick.
    """
    if ticks < 0:
        raise LengthMismatch("Tick count must be non-negative")
    if slow_period < 1:
        raise ConfigError("Slow period must be at least 1")
    p = _port_signal(inputs.p, gcm.ports.p, ticks, "p")
    n = _port_signal(inputs.n, gcm.ports.n, ticks, "n")
    r = _port_signal(inputs.r, gcm.ports.r, ticks, "r") if feedback is None else None
    l = _port_signal(inputs.l, gcm.ports.l, ticks, "l")

    gcm = dataclasses.replace(gcm, last_fired=None)
    rng = gcm.rng()
    out = np.zeros((ticks, gcm.output_dim))
    for t in range(ticks):
        out[t] = step_fast(gcm, p[t], n[t], rng)
        if (t + 1) % slow_period == 0:
            reward = feedback(t, out[t]) if feedback is not None else r[t]
            gcm = step_slow(gcm, l[t], reward)
    logger.debug("GCM run finished", ticks=ticks, slow_period=slow_period)
    return Signal(out), gcm


def run_gcm(gcm: Gcm, inputs: SignalBundle, ticks: int, slow_period: int = 10) -> Signal:
    """
    Run a module for `ticks` ticks.

    Args:
        gcm: Module to run (its seed fixes all randomness)
        inputs: p, n, r, l signals, each at least `ticks` long
        ticks: Number of ticks
        slow_period: K, ticks between slow-pathway updates

    Returns:
        Output signal of length `ticks`
    """
    signal, _ = simulate(gcm, inputs, ticks, slow_period)
    return signal
