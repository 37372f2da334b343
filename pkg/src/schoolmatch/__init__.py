"""School choice matching toolkit.

Deferred acceptance with round traces, consent-based efficiency
adjustment, trading cycles over envy digraphs, exhaustive ground-truth
enumeration, built-in benchmark instances, and a plain-text instance
format with a reporting command line.
"""

from .errors import DominationError, InvalidInstanceError, ResourceLimitError
from .model import (
    UNACCEPTABLE,
    BlockingPair,
    ConsentStructure,
    Matching,
    Rank,
    SchoolChoiceProblem,
    blocking_pairs,
    desires,
    dominates,
    envies,
    improved_students,
    is_nonwasteful,
    is_stable,
    validate_matching,
    weakly_dominates,
)
from .mechanisms import (
    DaRound,
    DaTrace,
    Interrupter,
    da_ttc,
    deferred_acceptance,
    eada,
    eada_full_consent_underdemanded,
    find_interrupters,
    ttc_from_endowment,
)
from .envy import (
    EnvyDigraph,
    FeedbackSet,
    TradingCycle,
    apply_cycles,
    build_envy_digraph,
    cycle_blocking_report,
    enumerate_feedback_sets,
    enumerate_trading_cycles,
    trade_decomposition,
)
from .oracle import (
    DominatingEntry,
    DominatingSet,
    FrontierReport,
    doubly_dominates,
    enumerate_dominating_matchings,
    enumerate_stable_matchings,
    improvement_ratio,
    is_pareto_efficient,
    max_improvement,
    pareto_frontier_over_da,
)
from .instances import FamilySpec, example1, example2, example3, random_problem
from .textio import parse_instance, parse_instance_with_consent, serialize_instance

__all__ = [
    "BlockingPair",
    "ConsentStructure",
    "DaRound",
    "DaTrace",
    "DominatingEntry",
    "DominatingSet",
    "DominationError",
    "EnvyDigraph",
    "FamilySpec",
    "FeedbackSet",
    "FrontierReport",
    "Interrupter",
    "InvalidInstanceError",
    "Matching",
    "Rank",
    "ResourceLimitError",
    "SchoolChoiceProblem",
    "TradingCycle",
    "UNACCEPTABLE",
    "apply_cycles",
    "blocking_pairs",
    "build_envy_digraph",
    "cycle_blocking_report",
    "da_ttc",
    "deferred_acceptance",
    "desires",
    "dominates",
    "doubly_dominates",
    "eada",
    "eada_full_consent_underdemanded",
    "enumerate_dominating_matchings",
    "enumerate_feedback_sets",
    "enumerate_stable_matchings",
    "enumerate_trading_cycles",
    "envies",
    "example1",
    "example2",
    "example3",
    "find_interrupters",
    "improved_students",
    "improvement_ratio",
    "is_nonwasteful",
    "is_pareto_efficient",
    "is_stable",
    "max_improvement",
    "pareto_frontier_over_da",
    "parse_instance",
    "parse_instance_with_consent",
    "random_problem",
    "serialize_instance",
    "trade_decomposition",
    "ttc_from_endowment",
    "validate_matching",
    "weakly_dominates",
]
