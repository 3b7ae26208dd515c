"""Interactive fault isolation under qualitative possibilistic uncertainty.

The package splits into five layers, each usable on its own:

``scale``
    Qualitative certainty scales: totally ordered symbolic levels with
    exact rational values, complement, and Gödel implication.
``model``
    Component networks: parameters, weighted behaviour rules, links,
    observations, and candidate disorders.
``dsl``
    The text format for models and observation sets, with source spans
    on every diagnostic.
``engine``
    The reasoning core: rule closure, consistency and coverage degrees,
    influence paths, candidate enumeration, ranking, probe suggestion.
``session``
    Interactive troubleshooting on top of the engine: an anchored
    hypothesis board, an append-only journal, deterministic replay.

``cli`` and ``service`` expose the same operations as a command line
tool and an HTTP API; they add no reasoning of their own.
"""

from .dsl import (
    parse_model,
    parse_observations,
    serialize_model,
    serialize_observations,
)
from .engine import (
    CandidateReport,
    Derivation,
    DiagnosisReport,
    Expectation,
    ProbeSuggestion,
    abduction_degree,
    consistency_degree,
    derive,
    diagnose,
    dominates,
    enumerate_candidates,
    expected_manifestations,
    path_possibilities,
    prediction_points,
    relevant_comps,
    relevant_links,
    suggest_probes,
)
from .model import (
    BehaviorRule,
    Component,
    Diagnostic,
    DiagnosticProblem,
    Disorder,
    Endpoint,
    FaultAssumption,
    FaultCondition,
    Link,
    Manifestation,
    ModelError,
    Observations,
    ParamDecl,
    SourceSpan,
    StateAssumption,
    StateCondition,
    SystemModel,
    compose_problem,
    fault_disorder,
    signature_disorder,
    validate_model,
)
from .scale import (
    DEFAULT_SCALE,
    Degree,
    Level,
    Scale,
    ScaleError,
    godel_implies,
    normalize_level_name,
)
from .session import (
    BoardRow,
    BoardSnapshot,
    ExpectedPoint,
    Session,
    SessionError,
    add_observation,
    board_fingerprint,
    create_session,
    get_board,
    record_verdict,
    replay_journal,
    what_if,
)

__all__ = [
    "BehaviorRule",
    "BoardRow",
    "BoardSnapshot",
    "CandidateReport",
    "Component",
    "DEFAULT_SCALE",
    "Degree",
    "Derivation",
    "DiagnosisReport",
    "Diagnostic",
    "DiagnosticProblem",
    "Disorder",
    "Endpoint",
    "Expectation",
    "ExpectedPoint",
    "FaultAssumption",
    "FaultCondition",
    "Level",
    "Link",
    "Manifestation",
    "ModelError",
    "Observations",
    "ParamDecl",
    "ProbeSuggestion",
    "Scale",
    "ScaleError",
    "Session",
    "SessionError",
    "SourceSpan",
    "StateAssumption",
    "StateCondition",
    "SystemModel",
    "abduction_degree",
    "add_observation",
    "board_fingerprint",
    "compose_problem",
    "consistency_degree",
    "create_session",
    "derive",
    "diagnose",
    "dominates",
    "enumerate_candidates",
    "expected_manifestations",
    "fault_disorder",
    "get_board",
    "godel_implies",
    "normalize_level_name",
    "parse_model",
    "parse_observations",
    "path_possibilities",
    "prediction_points",
    "record_verdict",
    "relevant_comps",
    "relevant_links",
    "replay_journal",
    "serialize_model",
    "serialize_observations",
    "signature_disorder",
    "suggest_probes",
    "validate_model",
    "what_if",
]
