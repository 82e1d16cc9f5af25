"""
Classic matched-filter receiver built from frozen GCMs.

One decision unit per row of the symbol transition graph correlates the
incoming samples with the templates of the symbols allowed after that row.
The harness feeds the previous decision back as inhibition, so exactly one
unit is active per symbol and forbidden successions can never be decoded.
"""

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np
import structlog
from scipy.special import erfc

from matic.cognet import Edge, Network, NetworkRunner, PortKind
from matic.errors import ConfigError, DataError
from matic.gcm import Gcm, MatchedFilterBank, Ports, TabulatedNonlinear

from .configs import ReceiverConfig
from .sweeps import fan_out

logger = structlog.get_logger(__name__)

SAMPLES = "samples"
INHIBIT = "inhibit"
DECODED = "decoded"
START_UNIT = "unit_start"


def _unit_id(row: int) -> str:
    return f"unit_{row}"


def build_receiver(cfg: ReceiverConfig) -> Network:
    """
    Wire the receiver network.

    External inputs: `samples` (one symbol interval of baseband samples) and
    `inhibit` (one line per transition-graph row plus the start row; a raised
    line vetoes that row's unit). Node `decoded` emits the symbol index.

    Args:
        cfg: Validated receiver configuration

    Returns:
        Network of Frozen GCMs
    """
    size = len(cfg.alphabet)
    templates = np.asarray(cfg.templates, dtype=float)
    nodes: Dict[str, Gcm] = {}
    edges: List[Edge] = []

    rows = [(_unit_id(i), [cfg.index(s) for s in cfg.transitions[symbol]]) for i, symbol in enumerate(cfg.alphabet)]
    rows.append((START_UNIT, list(range(size))))
    for line, (unit, allowed) in enumerate(rows):
        bank = MatchedFilterBank(templates[allowed], tuple(float(j + 1) for j in allowed), "argmax")
        nodes[unit] = Gcm(bank, ports=Ports(p=1, n=cfg.samples_per_symbol))
        edges.append(Edge(SAMPLES, unit, PortKind.EXCITATORY))
        edges.append(Edge(INHIBIT, unit, PortKind.INHIBITORY, (line,)))

    # Vetoed units sit at 0, so the active unit's label (index + 1) is the sum.
    combiner = TabulatedNonlinear(np.ones(size + 1), np.array([0.0, size + 1.0]), np.array([-1.0, float(size)]))
    nodes[DECODED] = Gcm(combiner, ports=Ports(n=size + 1))
    edges.extend(Edge(unit, DECODED, PortKind.EXCITATORY) for unit, _ in rows)

    net = Network(nodes, edges, {SAMPLES: cfg.samples_per_symbol, INHIBIT: size + 1})
    logger.info("Receiver built", symbols=size, samples_per_symbol=cfg.samples_per_symbol, units=len(rows))
    return net


def decode(net: Network, samples: np.ndarray, seed: int = 0) -> np.ndarray:
    """
    Decode a sample stream with decision feedback.

    Args:
        net: Network from `build_receiver`
        samples: (symbols x samples_per_symbol) array
        seed: Run seed (the receiver itself is noiseless)

    Returns:
        Decoded symbol indices
    """
    samples = np.asarray(samples, dtype=float)
    width = net.external_inputs[SAMPLES]
    if samples.ndim != 2 or samples.shape[1] != width:
        raise DataError(f"Expected a (symbols x {width}) sample matrix", shape=str(samples.shape))
    rows = net.external_inputs[INHIBIT]
    start = rows - 1
    runner = NetworkRunner(net, seed=seed)
    decoded = np.zeros(samples.shape[0], dtype=int)
    previous = start
    for t, chunk in enumerate(samples):
        inhibit = np.ones(rows)
        inhibit[previous] = 0.0
        out = runner.step({SAMPLES: chunk, INHIBIT: inhibit})
        symbol = int(round(float(out[DECODED][0])))
        decoded[t] = symbol
        previous = symbol
    return decoded


def random_message(cfg: ReceiverConfig, length: int, rng: np.random.Generator) -> np.ndarray:
    """A symbol walk that only takes transitions the graph allows."""
    message = np.zeros(length, dtype=int)
    current: Optional[int] = None
    for t in range(length):
        if current is None:
            choices = list(range(len(cfg.alphabet)))
        else:
            choices = [cfg.index(s) for s in cfg.transitions[cfg.alphabet[current]]]
        current = int(choices[int(rng.integers(len(choices)))])
        message[t] = current
    return message


def transmit(
    cfg: ReceiverConfig,
    symbols: Sequence[int],
    rng: np.random.Generator,
    ebn0_db: Optional[float] = None,
) -> np.ndarray:
    """
    Modulate symbols onto their templates and add white Gaussian noise.

    The noise variance per sample is `cfg.noise_var`, or N0/2 with
    N0 = Eb / 10^(ebn0_db/10) and Eb the mean template energy when
    `ebn0_db` is given.
    """
    templates = np.asarray(cfg.templates, dtype=float)
    symbols = np.asarray(symbols, dtype=int)
    if symbols.size and (symbols.min() < 0 or symbols.max() >= len(cfg.alphabet)):
        raise DataError("Symbol index outside the alphabet")
    clean = templates[symbols]
    if ebn0_db is None:
        variance = cfg.noise_var
    else:
        eb = float(np.mean(np.sum(templates**2, axis=1)))
        variance = eb / (2.0 * 10.0 ** (ebn0_db / 10.0))
    if variance == 0.0:
        return clean
    return clean + rng.normal(0.0, math.sqrt(variance), size=clean.shape)


def bpsk_config(samples_per_symbol: int = 8) -> ReceiverConfig:
    """Antipodal unit-energy rectangular pulses; bit 0 -> +1, bit 1 -> -1."""
    if samples_per_symbol < 1:
        raise ConfigError("samples_per_symbol must be at least 1")
    pulse = np.ones(samples_per_symbol) / math.sqrt(samples_per_symbol)
    return ReceiverConfig(
        alphabet=["0", "1"],
        templates=[pulse.tolist(), (-pulse).tolist()],
        transitions={"0": ["0", "1"], "1": ["0", "1"]},
        samples_per_symbol=samples_per_symbol,
    )


def theoretical_ber(ebn0_db: float) -> float:
    """Q(sqrt(2 Eb/N0)) = erfc(sqrt(Eb/N0)) / 2."""
    return 0.5 * float(erfc(math.sqrt(10.0 ** (ebn0_db / 10.0))))


@dataclass(frozen=True)
class BerPoint:
    ebn0_db: float
    symbols: int
    errors: int
    theoretical: float

    @property
    def ber(self) -> float:
        return self.errors / self.symbols if self.symbols else 0.0

    @property
    def sigma(self) -> float:
        """Binomial standard deviation of the empirical BER."""
        p = self.theoretical
        return math.sqrt(p * (1.0 - p) / self.symbols) if self.symbols else 0.0

    def within(self, sigmas: float = 3.0) -> bool:
        return abs(self.ber - self.theoretical) <= sigmas * self.sigma

    def to_row(self) -> Dict[str, float]:
        return {
            "ebn0_db": self.ebn0_db,
            "symbols": self.symbols,
            "errors": self.errors,
            "ber": self.ber,
            "theoretical_ber": self.theoretical,
        }


def ber_point(ebn0_db: float, symbols: int, seed: int, samples_per_symbol: int = 8) -> BerPoint:
    """Monte Carlo BER of the BPSK receiver at one Eb/N0."""
    cfg = bpsk_config(samples_per_symbol)
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, size=symbols)
    decoded = decode(build_receiver(cfg), transmit(cfg, bits, rng, ebn0_db), seed)
    errors = int(np.count_nonzero(decoded != bits))
    point = BerPoint(float(ebn0_db), int(symbols), errors, theoretical_ber(ebn0_db))
    logger.info("BER point", ebn0_db=ebn0_db, symbols=symbols, errors=errors, theoretical=point.theoretical)
    return point


def ber_sweep(
    points: Sequence[float],
    symbols: int,
    seed: int = 0,
    samples_per_symbol: int = 8,
    max_workers: int = 4,
) -> List[BerPoint]:
    """BER at each Eb/N0 point, one seeded job per point."""
    results = fan_out(
        lambda ebn0, job_seed: ber_point(ebn0, symbols, job_seed, samples_per_symbol),
        list(points),
        seed,
        max_workers,
    )
    return [point for _, point in results]
