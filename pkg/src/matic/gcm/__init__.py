"""
General Cognitive Module package for MaTIC.
"""

from .config import gcm_from_dict, gcm_to_dict, inputs_from_dict
from .metabolic import Frozen, GatedRewardUpdate, MetabolicFn, MetabolicKind, gate_open
from .module import BASELINE, Gcm, Ports, run_gcm, simulate, step_fast, step_slow
from .signal import Signal, SignalBundle
from .transfer import (
    BinaryRuleTable,
    MatchedFilterBank,
    RuleEntry,
    Selection,
    TabulatedNonlinear,
    TransferFn,
    TransferKind,
    and_table,
    constant_table,
    identity_table,
    not_table,
    rule_table,
    transfer_from_dict,
)

__all__ = [
    "gcm_from_dict",
    "gcm_to_dict",
    "inputs_from_dict",
    "Frozen",
    "GatedRewardUpdate",
    "MetabolicFn",
    "MetabolicKind",
    "gate_open",
    "BASELINE",
    "Gcm",
    "Ports",
    "run_gcm",
    "simulate",
    "step_fast",
    "step_slow",
    "Signal",
    "SignalBundle",
    "BinaryRuleTable",
    "MatchedFilterBank",
    "RuleEntry",
    "Selection",
    "TabulatedNonlinear",
    "TransferFn",
    "TransferKind",
    "and_table",
    "constant_table",
    "identity_table",
    "not_table",
    "rule_table",
    "transfer_from_dict",
]
