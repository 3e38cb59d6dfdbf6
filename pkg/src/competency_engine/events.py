"""Append-only interaction-event log and completion semantics.

Students interact with learning resources (file/text/online/video units and
exercises); every interaction is an immutable event.  All progress state is
derived by folding the event set in ``(timestamp, event_id)`` order, so the
same events always produce the same answers regardless of ingestion order.

Completion rules per unit kind:

* file unit: complete at the first download click;
* text unit: complete at the first open;
* online unit: complete at the first link click;
* video unit: complete exactly five minutes (inclusive) after the first
  reveal click;
* any non-exercise unit: a manual toggle flips the state current at its
  timestamp, and the latest action wins.

Exercises are never "completed"; they count via participation (at least one
submission) and their latest normalized score.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from datetime import datetime, timedelta
from enum import Enum
from typing import Iterable, Mapping, Optional

from .errors import (
    ExerciseNotSupported,
    InvalidResource,
    KindMismatch,
    NotAnExercise,
    ScoreMissing,
    ScoreOutOfRange,
    ScoreUnexpected,
    UnknownResource,
)
from .timeutil import format_timestamp, parse_timestamp, truncate_ms

VIDEO_COMPLETION_DELAY = timedelta(minutes=5)


class ResourceKind(str, Enum):
    FILE_UNIT = "FILE_UNIT"
    TEXT_UNIT = "TEXT_UNIT"
    ONLINE_UNIT = "ONLINE_UNIT"
    VIDEO_UNIT = "VIDEO_UNIT"
    EXERCISE = "EXERCISE"

    @classmethod
    def parse(cls, value: "ResourceKind | str") -> "ResourceKind":
        if isinstance(value, ResourceKind):
            return value
        try:
            return cls(str(value).strip().upper())
        except ValueError:
            raise ValueError(f"unknown resource kind {value!r}") from None


class EventKind(str, Enum):
    DOWNLOAD_CLICK = "DOWNLOAD_CLICK"
    TEXT_OPEN = "TEXT_OPEN"
    LINK_CLICK = "LINK_CLICK"
    VIDEO_REVEAL = "VIDEO_REVEAL"
    MANUAL_TOGGLE = "MANUAL_TOGGLE"
    EXERCISE_SUBMISSION = "EXERCISE_SUBMISSION"

    @classmethod
    def parse(cls, value: "EventKind | str") -> "EventKind":
        if isinstance(value, EventKind):
            return value
        try:
            return cls(str(value).strip().upper())
        except ValueError:
            raise ValueError(f"unknown event kind {value!r}") from None


# Which resource kinds each event kind may target.
COMPATIBLE_RESOURCE_KINDS: dict[EventKind, frozenset[ResourceKind]] = {
    EventKind.DOWNLOAD_CLICK: frozenset({ResourceKind.FILE_UNIT}),
    EventKind.TEXT_OPEN: frozenset({ResourceKind.TEXT_UNIT}),
    EventKind.LINK_CLICK: frozenset({ResourceKind.ONLINE_UNIT}),
    EventKind.VIDEO_REVEAL: frozenset({ResourceKind.VIDEO_UNIT}),
    EventKind.EXERCISE_SUBMISSION: frozenset({ResourceKind.EXERCISE}),
    EventKind.MANUAL_TOGGLE: frozenset(
        {
            ResourceKind.FILE_UNIT,
            ResourceKind.TEXT_UNIT,
            ResourceKind.ONLINE_UNIT,
            ResourceKind.VIDEO_UNIT,
        }
    ),
}

# The click that triggers automatic completion, per unit kind.
AUTO_COMPLETION_TRIGGER: dict[ResourceKind, EventKind] = {
    ResourceKind.FILE_UNIT: EventKind.DOWNLOAD_CLICK,
    ResourceKind.TEXT_UNIT: EventKind.TEXT_OPEN,
    ResourceKind.ONLINE_UNIT: EventKind.LINK_CLICK,
    ResourceKind.VIDEO_UNIT: EventKind.VIDEO_REVEAL,
}


@dataclass(frozen=True)
class LearningResource:
    """One unit of course content; ``max_points`` only for exercises."""

    id: str
    course_id: str
    kind: ResourceKind
    title: str
    order_index: int = 0
    max_points: Optional[float] = None

    def __post_init__(self):
        if self.kind is ResourceKind.EXERCISE:
            if self.max_points is None or self.max_points <= 0:
                raise InvalidResource(
                    f"exercise {self.id!r} requires max_points > 0, got {self.max_points!r}"
                )
        elif self.max_points is not None:
            raise InvalidResource(
                f"{self.kind.value} {self.id!r} must not carry max_points"
            )
        if self.order_index < 0:
            raise InvalidResource(f"order_index must be >= 0, got {self.order_index}")


@dataclass(frozen=True)
class InteractionEvent:
    """Immutable record of one student action.

    ``score`` is the normalized fraction achieved/max_points and is present
    exactly for EXERCISE_SUBMISSION events.
    """

    event_id: str
    student_id: str
    resource_id: str
    kind: EventKind
    timestamp: datetime
    score: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "timestamp", truncate_ms(self.timestamp))
        if self.kind is EventKind.EXERCISE_SUBMISSION:
            if self.score is None:
                raise ScoreMissing(f"submission {self.event_id!r} has no score")
            if not 0.0 <= self.score <= 1.0:
                raise ScoreOutOfRange(
                    f"score must be in [0, 1], got {self.score} ({self.event_id!r})"
                )
        elif self.score is not None:
            raise ScoreUnexpected(
                f"{self.kind.value} event {self.event_id!r} must not carry a score"
            )

    @property
    def sort_key(self) -> tuple[datetime, str]:
        """Total event order: timestamp, then event id as the tie-break."""
        return (self.timestamp, self.event_id)

    def to_dict(self) -> dict:
        record = {
            "event_id": self.event_id,
            "student_id": self.student_id,
            "resource_id": self.resource_id,
            "kind": self.kind.value,
            "timestamp": format_timestamp(self.timestamp),
        }
        if self.score is not None:
            record["score"] = self.score
        return record

    @classmethod
    def from_dict(cls, record: Mapping) -> "InteractionEvent":
        return cls(
            event_id=str(record["event_id"]),
            student_id=str(record["student_id"]),
            resource_id=str(record["resource_id"]),
            kind=EventKind.parse(record["kind"]),
            timestamp=parse_timestamp(record["timestamp"]),
            score=record.get("score"),
        )


class CompletionSource(str, Enum):
    NONE = "NONE"
    AUTOMATIC = "AUTOMATIC"
    MANUAL = "MANUAL"


@dataclass(frozen=True)
class CompletionStatus:
    """Completion of one lecture unit for one student at a query instant."""

    completed: bool
    source: CompletionSource
    effective_at: Optional[datetime] = None

    def to_dict(self) -> dict:
        return {
            "completed": self.completed,
            "source": self.source.value,
            "effective_at": format_timestamp(self.effective_at) if self.effective_at else None,
        }


@dataclass(frozen=True)
class ExerciseStatistics:
    """Cohort view of one exercise, optionally relative to one student."""

    exercise_id: str
    participant_count: int
    course_average: float
    student_score: Optional[float] = None
    student_vs_average: Optional[float] = None

    def to_dict(self) -> dict:
        record = {
            "exercise_id": self.exercise_id,
            "participant_count": self.participant_count,
            "course_average": self.course_average,
        }
        if self.student_score is not None:
            record["student_score"] = self.student_score
            record["student_vs_average"] = self.student_vs_average
        return record


def validate_event(event: InteractionEvent, resource: LearningResource) -> None:
    """Check event/resource kind compatibility (event shape is validated
    at construction)."""
    if resource.kind not in COMPATIBLE_RESOURCE_KINDS[event.kind]:
        raise KindMismatch(
            f"{event.kind.value} cannot target a {resource.kind.value} "
            f"(event {event.event_id!r}, resource {resource.id!r})"
        )


class EventLog:
    """Append-only, idempotent store of interaction events.

    Events are kept sorted by ``(timestamp, event_id)``; re-ingesting an
    event id already present is a silent no-op, so any multiset of events
    collapses to its de-duplicated set regardless of arrival order.
    """

    def __init__(self, resources: Optional[Mapping[str, LearningResource]] = None):
        # `resources` is a live reference to the course catalog; when given,
        # ingestion validates resource existence and kind compatibility.
        self._resources = resources
        self._events: list[InteractionEvent] = []
        self._keys: list[tuple[datetime, str]] = []
        self._ids: set[str] = set()

    def __len__(self) -> int:
        return len(self._events)

    def __iter__(self):
        return iter(self._events)

    def bind_resources(self, resources: Mapping[str, LearningResource]) -> None:
        """Swap the catalog future ingests validate against."""
        self._resources = resources

    def ingest(self, event: InteractionEvent, validate: bool = True) -> bool:
        """Append one event; returns False for an event_id already present.

        ``validate=False`` is for replaying a log file whose events were
        already validated when first appended.
        """
        if event.event_id in self._ids:
            return False
        if validate and self._resources is not None:
            resource = self._resources.get(event.resource_id)
            if resource is None:
                raise UnknownResource(
                    f"event {event.event_id!r} targets unknown resource {event.resource_id!r}"
                )
            validate_event(event, resource)
        index = bisect.bisect(self._keys, event.sort_key)
        self._events.insert(index, event)
        self._keys.insert(index, event.sort_key)
        self._ids.add(event.event_id)
        return True

    def ingest_all(self, events: Iterable[InteractionEvent]) -> int:
        accepted = 0
        for event in events:
            if self.ingest(event):
                accepted += 1
        return accepted

    def events_for(
        self,
        student_id: str,
        resource_id: str,
        upto: Optional[datetime] = None,
    ) -> list[InteractionEvent]:
        """This student's events for one resource, ordered, optionally
        limited to timestamps <= ``upto``."""
        return [
            e
            for e in self._events
            if e.student_id == student_id
            and e.resource_id == resource_id
            and (upto is None or e.timestamp <= upto)
        ]

    def events_for_resource(
        self, resource_id: str, upto: Optional[datetime] = None
    ) -> list[InteractionEvent]:
        return [
            e
            for e in self._events
            if e.resource_id == resource_id and (upto is None or e.timestamp <= upto)
        ]

    def latest_timestamp(self) -> Optional[datetime]:
        return self._events[-1].timestamp if self._events else None


def completion_status(
    log: EventLog,
    student_id: str,
    resource: LearningResource,
    query_time: datetime,
) -> CompletionStatus:
    """Fold the student's events for a lecture unit up to ``query_time``.

    The automatic rule is a synthetic state change at the first qualifying
    click (plus five minutes, inclusive, for videos); it applies only if the
    unit is not already completed at that instant.  Manual toggles flip the
    state current at their timestamp; at an equal instant the automatic
    change applies first.
    """
    if resource.kind is ResourceKind.EXERCISE:
        raise ExerciseNotSupported(
            f"completion is undefined for exercises ({resource.id!r}); use participation"
        )
    query_time = truncate_ms(query_time)
    events = log.events_for(student_id, resource.id)

    trigger = AUTO_COMPLETION_TRIGGER[resource.kind]
    auto_at: Optional[datetime] = None
    for event in events:
        if event.kind is trigger:
            auto_at = event.timestamp
            if resource.kind is ResourceKind.VIDEO_UNIT:
                auto_at += VIDEO_COMPLETION_DELAY
            break

    # (instant, priority, tie) actions; priority 0 puts the synthetic
    # automatic change before manual toggles at the same instant.
    actions: list[tuple[datetime, int, str, str]] = [
        (e.timestamp, 1, e.event_id, "toggle")
        for e in events
        if e.kind is EventKind.MANUAL_TOGGLE
    ]
    if auto_at is not None:
        actions.append((auto_at, 0, "", "auto"))
    actions.sort()

    completed = False
    source = CompletionSource.NONE
    effective_at: Optional[datetime] = None
    for instant, _, _, action in actions:
        if instant > query_time:
            break
        if action == "auto":
            if not completed:
                completed = True
                source = CompletionSource.AUTOMATIC
                effective_at = instant
        else:
            completed = not completed
            source = CompletionSource.MANUAL
            effective_at = instant
    return CompletionStatus(completed=completed, source=source, effective_at=effective_at)


def participation_status(
    log: EventLog,
    student_id: str,
    exercise: LearningResource,
    upto: Optional[datetime] = None,
) -> bool:
    """True iff the student has at least one submission, any score."""
    _require_exercise(exercise)
    return any(
        e.kind is EventKind.EXERCISE_SUBMISSION
        for e in log.events_for(student_id, exercise.id, upto)
    )


def latest_score(
    log: EventLog,
    student_id: str,
    exercise: LearningResource,
    upto: Optional[datetime] = None,
) -> Optional[float]:
    """Score of the submission with the greatest (timestamp, event_id)."""
    _require_exercise(exercise)
    submissions = [
        e
        for e in log.events_for(student_id, exercise.id, upto)
        if e.kind is EventKind.EXERCISE_SUBMISSION
    ]
    return submissions[-1].score if submissions else None


def exercise_statistics(
    log: EventLog,
    exercise: LearningResource,
    student_id: Optional[str] = None,
    upto: Optional[datetime] = None,
) -> ExerciseStatistics:
    """Participant count, mean of latest scores, and the student's offset."""
    _require_exercise(exercise)
    latest_by_student: dict[str, float] = {}
    for event in log.events_for_resource(exercise.id, upto):
        if event.kind is EventKind.EXERCISE_SUBMISSION:
            # events arrive sorted, so the last write per student wins
            latest_by_student[event.student_id] = event.score
    count = len(latest_by_student)
    average = sum(latest_by_student.values()) / count if count else 0.0
    student_score = latest_by_student.get(student_id) if student_id is not None else None
    return ExerciseStatistics(
        exercise_id=exercise.id,
        participant_count=count,
        course_average=average,
        student_score=student_score,
        student_vs_average=(student_score - average) if student_score is not None else None,
    )


def _require_exercise(resource: LearningResource) -> None:
    if resource.kind is not ResourceKind.EXERCISE:
        raise NotAnExercise(f"resource {resource.id!r} is a {resource.kind.value}")
