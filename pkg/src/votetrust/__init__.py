"""Trust-assumption models of voting systems: parse, compare, stress-test."""
from .analysis import (
    DEFAULT_WEIGHTS,
    CriticalityProfile,
    DominanceResult,
    Relation,
    WeightConfig,
    assumption_set,
    dominance,
    goal_matrix,
    pareto_frontier,
    profile,
    rank,
    score,
)
from .corpus import check_paper_claims, load_builtin_corpus
from .diagnostics import ModelError, ParseDiagnostic, SourceSpan, UnknownReferenceError
from .dsl import merge_models, parse_model, serialize_model
from .model import (
    ConditionNote,
    GoalId,
    Impact,
    PartyId,
    SeverityKey,
    SystemId,
    TrustAssumption,
    TrustMode,
    TrustModel,
    canonical_systems,
    severity_key,
    severity_leq,
)
from .scenarios import (
    DEFAULT_ENV,
    ScenarioEnv,
    breach,
    effective_assumptions,
    minimal_coalitions,
    system_resilience,
    whatif_remove,
)
from .validation import validate_model

__all__ = [
    "DEFAULT_WEIGHTS",
    "CriticalityProfile",
    "DominanceResult",
    "Relation",
    "WeightConfig",
    "assumption_set",
    "dominance",
    "goal_matrix",
    "pareto_frontier",
    "profile",
    "rank",
    "score",
    "check_paper_claims",
    "load_builtin_corpus",
    "ModelError",
    "ParseDiagnostic",
    "SourceSpan",
    "UnknownReferenceError",
    "merge_models",
    "parse_model",
    "serialize_model",
    "ConditionNote",
    "GoalId",
    "Impact",
    "PartyId",
    "SeverityKey",
    "SystemId",
    "TrustAssumption",
    "TrustMode",
    "TrustModel",
    "canonical_systems",
    "severity_key",
    "severity_leq",
    "DEFAULT_ENV",
    "ScenarioEnv",
    "breach",
    "effective_assumptions",
    "minimal_coalitions",
    "system_resilience",
    "whatif_remove",
    "validate_model",
]

__version__ = "0.1.0"
