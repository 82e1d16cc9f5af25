"""
Multi-armed bandit trained through the GCM slow pathway.

The policy is an arity-0 rule table with one entry per arm (output = arm
index, weight = value estimate) under epsilon-greedy selection. The
environment returns the payout of the pulled arm on the reward line; the
learning line follows the training schedule and freezes the policy once it
drops to 0.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np
import structlog

from matic.gcm import (
    BinaryRuleTable,
    GatedRewardUpdate,
    Gcm,
    Ports,
    RuleEntry,
    Selection,
    Signal,
    SignalBundle,
    simulate,
)

from .configs import BanditConfig
from .sweeps import fan_out

logger = structlog.get_logger(__name__)


def build_bandit(cfg: BanditConfig, seed: int = 0) -> Gcm:
    """
    Build the bandit module.

    Args:
        cfg: Validated bandit configuration
        seed: Seed of the exploration stream

    Returns:
        GatedRewardUpdate module with one reward line and one learning line
    """
    entries = tuple(RuleEntry((), (float(arm),), cfg.initial_weight) for arm in range(cfg.arms))
    table = BinaryRuleTable(0, entries, Selection.EPSILON_GREEDY, cfg.epsilon)
    metabolic = GatedRewardUpdate(cfg.learning_rate, "incremental", "fired")
    return Gcm(table, metabolic, Ports(r=1, l=1), rng_seed=seed)


def greedy_arm(gcm: Gcm) -> int:
    table = gcm.transfer
    return int(table.entries[table.greedy_entry(())].output[0])


@dataclass
class BanditRun:
    arms: np.ndarray
    rewards: np.ndarray
    gcm: Gcm

    @property
    def greedy_arm(self) -> int:
        return greedy_arm(self.gcm)

    @property
    def table(self) -> str:
        """Serialized policy table."""
        return self.gcm.transfer.serialize()

    def to_rows(self) -> List[Dict[str, float]]:
        return [
            {"episode": t, "arm": int(a), "reward": float(r)}
            for t, (a, r) in enumerate(zip(self.arms, self.rewards))
        ]


def run_bandit(cfg: BanditConfig, seed: int = 0, episodes: Optional[int] = None) -> BanditRun:
    """
    Play `episodes` pulls (all configured episodes by default).

    Exploration and payout noise use separate generators derived from seed,
    so runs of different lengths share their common prefix.
    """
    episodes = cfg.total_episodes if episodes is None else episodes
    gcm = build_bandit(cfg, seed)
    env_rng = np.random.default_rng([seed, 1])
    arms = np.zeros(episodes, dtype=int)
    rewards = np.zeros(episodes)

    def environment(t: int, out: np.ndarray) -> np.ndarray:
        arm = int(round(float(out[0])))
        reward = cfg.payouts[arm]
        if cfg.payout_noise > 0.0:
            reward += float(env_rng.normal(0.0, cfg.payout_noise))
        arms[t] = arm
        rewards[t] = reward
        return np.array([reward])

    learning = Signal(np.array([cfg.learning(t) for t in range(episodes)], dtype=float).reshape(episodes, 1))
    _, final = simulate(gcm, SignalBundle(l=learning), episodes, slow_period=1, feedback=environment)
    logger.debug("Bandit run finished", episodes=episodes, greedy_arm=greedy_arm(final))
    return BanditRun(arms, rewards, final)


@dataclass(frozen=True)
class Convergence:
    best_arm: int
    runs: int
    converged: int
    greedy_arms: List[int]

    @property
    def rate(self) -> float:
        return self.converged / self.runs if self.runs else 0.0


def bandit_convergence(cfg: BanditConfig, seeds: int, seed: int = 0, max_workers: int = 4) -> Convergence:
    """Share of independently seeded runs whose greedy arm is the best-paying arm."""
    best = int(np.argmax(cfg.payouts))
    results = fan_out(lambda _, job_seed: run_bandit(cfg, job_seed).greedy_arm, list(range(seeds)), seed, max_workers)
    arms = [arm for _, arm in results]
    converged = sum(1 for arm in arms if arm == best)
    logger.info("Bandit convergence", runs=seeds, converged=converged, best_arm=best)
    return Convergence(best, seeds, converged, arms)
