"""
Non-stationary information metrics for MaTIC.
"""

from .distributions import (
    PossibilitySet,
    SymbolDistribution,
    empirical_distribution,
    entropy,
    jensen_shannon,
    possibility_project,
    surprisal,
)
from .generators import (
    Regime,
    SourceSpec,
    generate_corpus,
    generate_trace,
    iid_source,
    regime_possibility,
    regime_switch_source,
    source_spec_from_dict,
)
from .profiles import (
    PossibilityFn,
    ProfilePoint,
    StationarityResult,
    StationarityVerdict,
    check_possibility_bound,
    entropy_profile,
    model_possibility,
    stationarity_test,
    time_varying_entropy,
    window_distributions,
)

__all__ = [
    "PossibilitySet",
    "SymbolDistribution",
    "empirical_distribution",
    "entropy",
    "jensen_shannon",
    "possibility_project",
    "surprisal",
    "Regime",
    "SourceSpec",
    "generate_corpus",
    "generate_trace",
    "iid_source",
    "regime_possibility",
    "regime_switch_source",
    "source_spec_from_dict",
    "PossibilityFn",
    "ProfilePoint",
    "StationarityResult",
    "StationarityVerdict",
    "check_possibility_bound",
    "entropy_profile",
    "model_possibility",
    "stationarity_test",
    "time_varying_entropy",
    "window_distributions",
]
