"""Per-student, per-competency mastery metrics.

Three numbers drive the student-facing rings:

* progress ``P``: fraction of linked resources done (lecture units completed,
  exercises participated);
* confidence ``C``: mean latest score over all linked exercises, counting an
  unattempted exercise as 0;
* mastery ``M = (1 - w) * P + w * C / T`` with weight ``w`` (default 2/3)
  and the competency's threshold ``T``; kept unclamped internally.

A competency is mastered when P is 100% and C is at or above T, or when an
instructor granted mastery explicitly.  Ring values are clamped for display:
blue = P, green = min(C/T, 1), red = 1 when mastered else min(M, 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from typing import Iterable, Mapping, Optional

from .errors import UnknownResource, WeightOutOfRange
from .events import (
    EventLog,
    LearningResource,
    ResourceKind,
    completion_status,
    latest_score,
    participation_status,
)
from .graph import Competency, validate_threshold

DEFAULT_MASTERY_WEIGHT = 2.0 / 3.0


class LinkKind(str, Enum):
    PREREQUISITE = "PREREQUISITE"
    LEARNING_GOAL = "LEARNING_GOAL"

    @classmethod
    def parse(cls, value: "LinkKind | str") -> "LinkKind":
        if isinstance(value, LinkKind):
            return value
        try:
            return cls(str(value).strip().upper())
        except ValueError:
            raise ValueError(f"unknown link kind {value!r}") from None


@dataclass(frozen=True)
class CompetencyLink:
    """Attaches one learning resource to one competency."""

    competency_id: str
    resource_id: str
    kind: LinkKind


@dataclass(frozen=True)
class MetricConfig:
    """Course-wide metric settings; one weight for the whole course."""

    mastery_weight: float = DEFAULT_MASTERY_WEIGHT

    def __post_init__(self):
        if not 0.0 <= self.mastery_weight < 1.0:
            raise WeightOutOfRange(
                f"mastery weight must be in [0, 1), got {self.mastery_weight}"
            )


@dataclass(frozen=True)
class RingValues:
    """Display fractions for the three rings, each in [0, 1]."""

    blue: float
    green: float
    red: float


@dataclass(frozen=True)
class CompetencyProgress:
    """Metric bundle for one (student, competency) pair."""

    competency_id: str
    student_id: str
    progress: float
    confidence: float
    mastery: float
    mastered: bool
    rings: RingValues
    manual_grant: bool

    def to_dict(self) -> dict:
        return {
            "competency_id": self.competency_id,
            "P": self.progress,
            "C": self.confidence,
            "M": self.mastery,
            "mastered": self.mastered,
            "rings": {
                "blue": self.rings.blue,
                "green": self.rings.green,
                "red": self.rings.red,
            },
        }


def _resolve_links(
    competency: Competency,
    links: Iterable[CompetencyLink],
    resources: Mapping[str, LearningResource],
) -> list[LearningResource]:
    resolved = []
    for link in links:
        if link.competency_id != competency.id:
            raise ValueError(
                f"link {link.competency_id!r}/{link.resource_id!r} does not "
                f"reference competency {competency.id!r}"
            )
        resource = resources.get(link.resource_id)
        if resource is None:
            raise UnknownResource(f"link references unknown resource {link.resource_id!r}")
        resolved.append(resource)
    return resolved


def progress(
    student_id: str,
    competency: Competency,
    links: Iterable[CompetencyLink],
    resources: Mapping[str, LearningResource],
    log: EventLog,
    query_time: datetime,
) -> float:
    """Fraction of linked resources done at ``query_time``.

    A lecture unit counts when completed, an exercise when participated;
    a competency with no linked resources has P = 0 by convention.
    """
    linked = _resolve_links(competency, links, resources)
    if not linked:
        return 0.0
    done = 0
    for resource in linked:
        if resource.kind is ResourceKind.EXERCISE:
            if participation_status(log, student_id, resource, upto=query_time):
                done += 1
        elif completion_status(log, student_id, resource, query_time).completed:
            done += 1
    return done / len(linked)


def confidence(
    student_id: str,
    competency: Competency,
    links: Iterable[CompetencyLink],
    resources: Mapping[str, LearningResource],
    log: EventLog,
    query_time: Optional[datetime] = None,
) -> float:
    """Mean latest score over all linked exercises, unattempted counting 0.

    C = 0 when the competency links no exercises.
    """
    linked = _resolve_links(competency, links, resources)
    exercises = [r for r in linked if r.kind is ResourceKind.EXERCISE]
    if not exercises:
        return 0.0
    total = 0.0
    for exercise in exercises:
        score = latest_score(log, student_id, exercise, upto=query_time)
        total += score if score is not None else 0.0
    return total / len(exercises)


def mastery_score(
    progress_value: float,
    confidence_value: float,
    threshold: float,
    config: MetricConfig = MetricConfig(),
) -> float:
    """``(1 - w) * P + w * C / T``, deliberately unclamped.

    Clamping happens only at ring rendering so over-threshold confidence
    stays observable.
    """
    validate_threshold(threshold)
    w = config.mastery_weight
    # written as a division so C == T yields the ratio 1.0 exactly
    return (1.0 - w) * progress_value + w * (confidence_value / threshold)


def is_mastered(
    progress_value: float,
    confidence_value: float,
    threshold: float,
    manual_grant: bool = False,
) -> bool:
    """Mastered iff progress is complete and confidence meets the threshold,
    or an instructor granted mastery explicitly."""
    validate_threshold(threshold)
    return manual_grant or (progress_value == 1.0 and confidence_value >= threshold)


def ring_values(
    progress_value: float,
    confidence_value: float,
    threshold: float,
    config: MetricConfig = MetricConfig(),
    mastered: bool = False,
) -> RingValues:
    """Clamped display fractions; mastery forces the red ring to 100%."""
    validate_threshold(threshold)
    green = min(confidence_value / threshold, 1.0)
    if mastered:
        red = 1.0
    else:
        red = min(mastery_score(progress_value, confidence_value, threshold, config), 1.0)
    return RingValues(blue=progress_value, green=green, red=red)


def competency_progress(
    student_id: str,
    competency: Competency,
    links: Iterable[CompetencyLink],
    resources: Mapping[str, LearningResource],
    log: EventLog,
    config: MetricConfig,
    query_time: datetime,
    manual_grant: bool = False,
) -> CompetencyProgress:
    """Compose P, C, M, the mastered flag, and ring values into one bundle."""
    links = list(links)
    p = progress(student_id, competency, links, resources, log, query_time)
    c = confidence(student_id, competency, links, resources, log, query_time)
    t = competency.mastery_threshold
    m = mastery_score(p, c, t, config)
    mastered = is_mastered(p, c, t, manual_grant)
    return CompetencyProgress(
        competency_id=competency.id,
        student_id=student_id,
        progress=p,
        confidence=c,
        mastery=m,
        mastered=mastered,
        rings=ring_values(p, c, t, config, mastered),
        manual_grant=manual_grant,
    )
