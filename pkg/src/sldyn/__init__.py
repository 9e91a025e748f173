"""Subjective-logic opinion dynamics.

Multinomial opinions with explicit uncertainty, a bijective mapping to
Dirichlet evidence, trust discounting, three belief-fusion operators, and
a deterministic synchronous simulator with convergence, classification and
fixed-point analysis for two-agent regimes.
"""

from .config import ConfigError, ScenarioConfig, config_from_dict, load_config, parse_config
from .dynamics import (
    RADICAL_TOL,
    BracketingError,
    ConvergenceReport,
    NetworkState,
    ScenarioClass,
    Trace,
    TraceStep,
    UpdateParams,
    check_weak_convergence,
    classify_pair,
    detect_convergence,
    find_fixed_point,
    simulate,
    step_network,
    step_two_agent,
)
from .evidence import (
    DEFAULT_PRIOR_WEIGHT,
    DogmaticOpinionError,
    EvidenceOpinion,
    dirichlet_density,
    expected_probability,
    from_evidence,
    to_evidence,
)
from .fusion import FUSION_OPERATORS, averaging_fuse, cumulative_fuse, weighted_fuse
from .opinion import (
    ADDITIVITY_TOL,
    DOGMATIC_EPS,
    DomainSpec,
    Opinion,
    from_projection,
    is_dogmatic,
    projected,
    uncertainty_maximize,
    vacuous,
)
from .trust import TrustOpinion, discount

__version__ = "0.1.0"

__all__ = [
    "ADDITIVITY_TOL",
    "BracketingError",
    "ConfigError",
    "ConvergenceReport",
    "DEFAULT_PRIOR_WEIGHT",
    "DOGMATIC_EPS",
    "DogmaticOpinionError",
    "DomainSpec",
    "EvidenceOpinion",
    "FUSION_OPERATORS",
    "NetworkState",
    "Opinion",
    "RADICAL_TOL",
    "ScenarioClass",
    "ScenarioConfig",
    "Trace",
    "TraceStep",
    "TrustOpinion",
    "UpdateParams",
    "averaging_fuse",
    "check_weak_convergence",
    "classify_pair",
    "config_from_dict",
    "cumulative_fuse",
    "detect_convergence",
    "dirichlet_density",
    "discount",
    "expected_probability",
    "find_fixed_point",
    "from_evidence",
    "from_projection",
    "is_dogmatic",
    "load_config",
    "parse_config",
    "projected",
    "simulate",
    "step_network",
    "step_two_agent",
    "to_evidence",
    "uncertainty_maximize",
    "vacuous",
    "weighted_fuse",
]
