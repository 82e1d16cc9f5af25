"""
Game character: a behavior tree compiled into one frozen GCM.

The excitatory lines carry the condition bits followed by a one-hot code of
the current pose. The rule table holds, for every such pattern, the poses the
tree may pick (random-select children become weighted entries); a pick the
animation graph does not allow from the current pose becomes "stay". The
single inhibitory line is the state-machine lock, raised while the current
animation has not played its minimum number of ticks.

Output vector: (pose code, dx, dy, dyaw). Code 0 means "hold the current
pose", which is also what a vetoed tick emits.
"""

import itertools
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from matic.errors import DataError
from matic.gcm import BinaryRuleTable, Gcm, Ports, RuleEntry, Selection, step_fast

from .configs import (
    BehaviorNode,
    CharacterConfig,
    ConditionNode,
    RandomNode,
    SelectorNode,
    SequenceNode,
)

logger = structlog.get_logger(__name__)

HOLD = (0.0, 0.0, 0.0, 0.0)

# (probability, succeeded, chosen pose or None)
Outcome = Tuple[float, bool, Optional[str]]


def tree_outcomes(node, conditions: Dict[str, bool]) -> List[Outcome]:
    """
    Every way one tick of the tree can end, with its probability.

    Conditions succeed or fail without choosing a pose; behavior leaves
    succeed and choose their pose. A sequence fails at its first failing
    child and otherwise keeps the last pose chosen; a selector stops at its
    first succeeding child; random-select runs one child picked by weight.
    """
    if isinstance(node, ConditionNode):
        return [(1.0, conditions[node.name], None)]
    if isinstance(node, BehaviorNode):
        return [(1.0, True, node.pose)]
    if isinstance(node, RandomNode):
        weights = node.weights or [1.0] * len(node.children)
        total = float(sum(weights))
        return [
            (prob * w / total, ok, pose)
            for child, w in zip(node.children, weights)
            if w > 0
            for prob, ok, pose in tree_outcomes(child, conditions)
        ]
    if isinstance(node, SequenceNode):
        done: List[Outcome] = []
        running: List[Outcome] = [(1.0, True, None)]
        for child in node.children:
            step: List[Outcome] = []
            for prob, _, pose in running:
                for p, ok, chosen in tree_outcomes(child, conditions):
                    if ok:
                        step.append((prob * p, True, chosen if chosen is not None else pose))
                    else:
                        done.append((prob * p, False, None))
            running = step
        return done + running
    if isinstance(node, SelectorNode):
        done = []
        pending = 1.0
        for child in node.children:
            failed = 0.0
            for p, ok, chosen in tree_outcomes(child, conditions):
                if ok:
                    done.append((pending * p, True, chosen))
                else:
                    failed += p
            pending *= failed
            if pending == 0.0:
                break
        if pending > 0.0:
            done.append((pending, False, None))
        return done
    raise DataError(f"Unknown behavior tree node {node!r}")


def _pose_output(cfg: CharacterConfig, pose: str) -> Tuple[float, ...]:
    index = cfg.pose_names.index(pose)
    spec = cfg.poses[index]
    return (float(index + 1), spec.dx, spec.dy, spec.dyaw)


def compile_rules(cfg: CharacterConfig) -> BinaryRuleTable:
    """Rule table over (condition bits, one-hot current pose)."""
    names = cfg.pose_names
    entries: List[RuleEntry] = []
    for bits in itertools.product((0, 1), repeat=len(cfg.conditions) + len(names)):
        cond_bits, pose_bits = bits[: len(cfg.conditions)], bits[len(cfg.conditions):]
        if sum(pose_bits) != 1:
            entries.append(RuleEntry(bits, HOLD, 1.0))
            continue
        current = names[pose_bits.index(1)]
        conditions = dict(zip(cfg.conditions, map(bool, cond_bits)))
        targets: Dict[str, float] = {}
        for prob, ok, pose in tree_outcomes(cfg.tree, conditions):
            target = pose if ok and pose is not None and cfg.allows(current, pose) else current
            targets[target] = targets.get(target, 0.0) + prob
        for target in sorted(targets, key=names.index):
            entries.append(RuleEntry(bits, _pose_output(cfg, target), targets[target]))
    return BinaryRuleTable(len(cfg.conditions) + len(names), tuple(entries), Selection.STOCHASTIC)


def build_character(cfg: CharacterConfig, seed: int = 0) -> Gcm:
    """
    Compile the character into a Frozen GCM.

    Args:
        cfg: Validated character configuration
        seed: Seed of the module's random-select stream

    Returns:
        Module with one lock line, conditions + poses excitatory lines
    """
    table = compile_rules(cfg)
    gcm = Gcm(table, ports=Ports(p=1, n=table.arity), rng_seed=seed)
    logger.info(
        "Character built",
        conditions=len(cfg.conditions),
        poses=len(cfg.poses),
        entries=len(table.entries),
    )
    return gcm


def yaw_quaternion(yaw: float) -> Tuple[float, float, float, float]:
    """Unit quaternion (w, x, y, z) of a rotation by yaw about the vertical axis."""
    half = 0.5 * yaw
    return (math.cos(half), 0.0, 0.0, math.sin(half))


@dataclass
class CharacterFrame:
    tick: int
    pose: str
    x: float
    y: float
    rotation: Tuple[float, float, float, float]

    def to_row(self) -> Dict[str, object]:
        w, qx, qy, qz = self.rotation
        return {"tick": self.tick, "pose": self.pose, "x": self.x, "y": self.y, "qw": w, "qx": qx, "qy": qy, "qz": qz}


def run_character(cfg: CharacterConfig, conditions: Sequence[Sequence[float]], seed: int = 0) -> List[CharacterFrame]:
    """
    Animate the character over a condition signal.

    Displacements are expressed in the character frame and rotated by the
    current yaw before they are integrated.

    Args:
        cfg: Validated character configuration
        conditions: One row of condition values per tick
        seed: Run seed

    Returns:
        One frame per tick
    """
    signal = np.asarray(conditions, dtype=float)
    if signal.size == 0:
        signal = np.zeros((len(conditions), len(cfg.conditions)))
    if signal.ndim != 2 or signal.shape[1] != len(cfg.conditions):
        raise DataError(f"Expected {len(cfg.conditions)} condition lines, got {signal.shape[1]}")
    gcm = build_character(cfg, seed)
    rng = gcm.rng()
    names = cfg.pose_names
    current = names.index(cfg.start_pose)
    played = 0
    x = y = yaw = 0.0
    frames: List[CharacterFrame] = []
    for t, row in enumerate(signal):
        onehot = np.zeros(len(names))
        onehot[current] = 1.0
        lock = np.array([1.0 if played < cfg.poses[current].min_ticks else 0.0])
        out = step_fast(gcm, lock, np.concatenate([row, onehot]), rng)
        code = int(round(float(out[0])))
        if code == 0:
            spec = cfg.poses[current]
            dx, dy, dyaw = spec.dx, spec.dy, spec.dyaw
        else:
            dx, dy, dyaw = (float(v) for v in out[1:4])
            if code - 1 != current:
                current = code - 1
                played = 0
        played += 1
        x += dx * math.cos(yaw) - dy * math.sin(yaw)
        y += dx * math.sin(yaw) + dy * math.cos(yaw)
        yaw += dyaw
        frames.append(CharacterFrame(t, names[current], x, y, yaw_quaternion(yaw)))
    logger.debug("Character run finished", ticks=len(frames), final_pose=names[current])
    return frames


def pose_transitions(frames: Sequence[CharacterFrame]) -> List[Tuple[str, str]]:
    """Consecutive (from, to) pose changes of a run."""
    return [(a.pose, b.pose) for a, b in zip(frames, frames[1:]) if a.pose != b.pose]
