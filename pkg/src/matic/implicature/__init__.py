"""
Implicature engine package for MaTIC.
"""

from .bank import infer_cause_bank
from .engine import (
    CandidatePair,
    brute_force_oracle,
    infer_cause,
    rank_candidates,
    score_candidate,
)
from .lattice import (
    Element,
    ImplicatureLattice,
    build_lattice,
    contexts_for,
    heyting_implies,
    pseudo_complement,
)
from .model import ConditionalModel, fit_or_load, signature, surprisal_bits

__all__ = [
    "infer_cause_bank",
    "CandidatePair",
    "brute_force_oracle",
    "infer_cause",
    "rank_candidates",
    "score_candidate",
    "Element",
    "ImplicatureLattice",
    "build_lattice",
    "contexts_for",
    "heyting_implies",
    "pseudo_complement",
    "ConditionalModel",
    "fit_or_load",
    "signature",
    "surprisal_bits",
]
