"""
Reference agents for MaTIC.

A matched-filter receiver, a behavior-tree character and a bandit learner,
each built only from GCMs and cognitive networks, plus the roadside garage
dialogue.
"""

from .bandit import BanditRun, Convergence, bandit_convergence, build_bandit, greedy_arm, run_bandit
from .character import (
    CharacterFrame,
    build_character,
    compile_rules,
    pose_transitions,
    run_character,
    tree_outcomes,
    yaw_quaternion,
)
from .configs import BanditConfig, CharacterConfig, ReceiverConfig, parse_config
from .garage import garage_from_dict, garage_scenario, garage_to_dict
from .receiver import (
    BerPoint,
    ber_point,
    ber_sweep,
    bpsk_config,
    build_receiver,
    decode,
    random_message,
    theoretical_ber,
    transmit,
)
from .sweeps import fan_out, job_seeds

__all__ = [
    "BanditRun",
    "Convergence",
    "bandit_convergence",
    "build_bandit",
    "greedy_arm",
    "run_bandit",
    "CharacterFrame",
    "build_character",
    "compile_rules",
    "pose_transitions",
    "run_character",
    "tree_outcomes",
    "yaw_quaternion",
    "BanditConfig",
    "CharacterConfig",
    "ReceiverConfig",
    "parse_config",
    "garage_from_dict",
    "garage_scenario",
    "garage_to_dict",
    "BerPoint",
    "ber_point",
    "ber_sweep",
    "bpsk_config",
    "build_receiver",
    "decode",
    "random_message",
    "theoretical_ber",
    "transmit",
    "fan_out",
    "job_seeds",
]
