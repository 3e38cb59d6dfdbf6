"""Competency-based education engine.

Models typed competency relation graphs, tracks student progress from an
append-only interaction-event log, computes mastery metrics, and generates
deterministic personalized learning paths.  Exposed as a library, an HTTP
service (:mod:`competency_engine.service`), and a CLI
(:mod:`competency_engine.cli`).
"""

from .errors import EngineError
from .events import (
    CompletionSource,
    CompletionStatus,
    EventKind,
    EventLog,
    ExerciseStatistics,
    InteractionEvent,
    LearningResource,
    ResourceKind,
    completion_status,
    exercise_statistics,
    latest_score,
    participation_status,
)
from .graph import (
    Competency,
    CompetencyGraph,
    MatchCluster,
    Relation,
    RelationType,
    Taxonomy,
    graph_from_document,
)
from .metrics import (
    CompetencyLink,
    CompetencyProgress,
    LinkKind,
    MetricConfig,
    RingValues,
    competency_progress,
    confidence,
    is_mastered,
    mastery_score,
    progress,
    ring_values,
)
from .paths import LearningPath, PathEntry, generate_path, ready_set, recommend_next
from .store import AppendResult, CourseStore, StoreSnapshot
from .simulate import simulate

__all__ = [
    "AppendResult",
    "Competency",
    "CompetencyGraph",
    "CompetencyLink",
    "CompetencyProgress",
    "CompletionSource",
    "CompletionStatus",
    "CourseStore",
    "EngineError",
    "EventKind",
    "EventLog",
    "ExerciseStatistics",
    "InteractionEvent",
    "LearningPath",
    "LearningResource",
    "LinkKind",
    "MatchCluster",
    "MetricConfig",
    "PathEntry",
    "Relation",
    "RelationType",
    "ResourceKind",
    "RingValues",
    "StoreSnapshot",
    "Taxonomy",
    "competency_progress",
    "completion_status",
    "confidence",
    "exercise_statistics",
    "generate_path",
    "graph_from_document",
    "is_mastered",
    "latest_score",
    "mastery_score",
    "participation_status",
    "progress",
    "ready_set",
    "recommend_next",
    "ring_values",
    "simulate",
]

__version__ = "0.1.0"
