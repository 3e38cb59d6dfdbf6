"""Exception hierarchy with stable machine-readable codes.

Every error carries a SCREAMING_SNAKE ``code`` that the HTTP layer and the
web UI key on, so codes are part of the public contract and must not change.
"""

from __future__ import annotations


class EngineError(Exception):
    """Base class for all engine errors."""

    code = "ENGINE_ERROR"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)
        self.message = message or self.code

    def to_dict(self) -> dict:
        return {"code": self.code, "message": self.message}


# --- course / entity lookup -------------------------------------------------

class UnknownCourse(EngineError):
    code = "UNKNOWN_COURSE"


class UnknownCompetency(EngineError):
    code = "UNKNOWN_COMPETENCY"


class UnknownRelation(EngineError):
    code = "UNKNOWN_RELATION"


class UnknownResource(EngineError):
    code = "UNKNOWN_RESOURCE"


class UnknownStudent(EngineError):
    code = "UNKNOWN_STUDENT"


# --- competency validation ---------------------------------------------------

class EmptyTitle(EngineError):
    code = "EMPTY_TITLE"


class ThresholdOutOfRange(EngineError):
    code = "THRESHOLD_OUT_OF_RANGE"


class WeightOutOfRange(EngineError):
    code = "WEIGHT_OUT_OF_RANGE"


class DuplicateId(EngineError):
    code = "DUPLICATE_ID"


# --- relation validation -----------------------------------------------------

class ReflexiveRelation(EngineError):
    code = "REFLEXIVE_RELATION"


class DuplicateRelation(EngineError):
    code = "DUPLICATE_RELATION"


class CycleIntroduced(EngineError):
    code = "CYCLE_INTRODUCED"


class CrossCourseRelation(EngineError):
    code = "CROSS_COURSE_RELATION"


class CyclicGraph(EngineError):
    """Defensive: raised if ordering ever encounters a cycle that the
    insertion-time checks should have prevented."""

    code = "CYCLIC_GRAPH"


# --- event validation ---------------------------------------------------------

class KindMismatch(EngineError):
    code = "KIND_MISMATCH"


class ScoreMissing(EngineError):
    code = "SCORE_MISSING"


class ScoreOutOfRange(EngineError):
    code = "SCORE_OUT_OF_RANGE"


class ScoreUnexpected(EngineError):
    code = "SCORE_UNEXPECTED"


class InvalidTimestamp(EngineError):
    code = "INVALID_TIMESTAMP"


class ExerciseNotSupported(EngineError):
    """Completion status is undefined for exercises; use participation."""

    code = "EXERCISE_NOT_SUPPORTED"


class NotAnExercise(EngineError):
    code = "NOT_AN_EXERCISE"


# --- resources / links ---------------------------------------------------------

class InvalidResource(EngineError):
    code = "INVALID_RESOURCE"


class DuplicateLink(EngineError):
    code = "DUPLICATE_LINK"


# --- storage / service ----------------------------------------------------------

class SchemaViolation(EngineError):
    code = "SCHEMA_VIOLATION"


class GraphInvariantViolation(EngineError):
    code = "GRAPH_INVARIANT_VIOLATION"


class PortInUse(EngineError):
    code = "PORT_IN_USE"


class DataDirUnavailable(EngineError):
    code = "DATA_DIR_UNAVAILABLE"
