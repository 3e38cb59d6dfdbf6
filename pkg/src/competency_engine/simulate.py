"""Deterministic student-behavior simulator.

Each simulated student repeatedly asks for the next recommended resource and
emits the event that finishes it: the matching click for a lecture unit, a
submission with a seeded score for an exercise.  Everything (event ids,
timestamps, scores) is derived from the seed and the course state, so the
same call always yields a byte-identical batch.

The simulator only GENERATES events; callers decide whether to append them
to a store, write them to a file, or POST them to a service.
"""

from __future__ import annotations

import random
from datetime import datetime, timedelta, timezone

from .errors import EngineError
from .events import (
    AUTO_COMPLETION_TRIGGER,
    EventKind,
    EventLog,
    InteractionEvent,
    ResourceKind,
)
from .paths import recommend_next
from .store import CourseStore

SIM_BASE_TIME = datetime(2026, 1, 1, 8, 0, 0, tzinfo=timezone.utc)
# stride > the 5-minute video delay, so a revealed video has matured by the
# time the student asks for the next recommendation
SIM_STRIDE = timedelta(minutes=6)
DEFAULT_SCORE_RANGE = (0.8, 1.0)


def simulate(
    store: CourseStore,
    course_id: str,
    student_count: int,
    steps: int,
    seed: int,
    score_range: tuple[float, float] = DEFAULT_SCORE_RANGE,
) -> list[dict]:
    """Generate a deterministic event batch for ``student_count`` students.

    The simulation starts from the course's current event log, so repeated
    runs continue where previous (ingested) batches left off.  Students who
    have nothing left to do sit out their turns.
    """
    state = store.state(course_id)
    if student_count < 0 or steps < 0:
        raise EngineError("student_count and steps must be non-negative")
    rng = random.Random(seed)
    students = [f"student-{i + 1:03d}" for i in range(student_count)]

    # scratch copy of the log: the simulator must see its own events
    scratch = EventLog(state.resources)
    for event in state.log:
        scratch.ingest(event, validate=False)

    # continue after whatever each student already did, so re-running against
    # an updated store neither collides on event ids nor repeats resources
    clocks: dict[str, datetime] = {}
    sequence: dict[str, int] = {}
    for sid in students:
        history = [e for e in state.log if e.student_id == sid]
        sequence[sid] = len(history)
        clocks[sid] = (
            max(SIM_BASE_TIME, history[-1].timestamp + SIM_STRIDE)
            if history
            else SIM_BASE_TIME
        )
    batch: list[dict] = []
    for _ in range(steps):
        for sid in students:
            now = clocks[sid]
            next_resource = recommend_next(
                sid,
                state.graph,
                state.links.values(),
                state.resources,
                scratch,
                state.config,
                now,
                grants=state.grants_for(sid),
            )
            if next_resource is None:
                continue
            resource = state.resources[next_resource]
            sequence[sid] += 1
            event_id = f"sim{seed}-{sid}-{sequence[sid]:04d}"
            if resource.kind is ResourceKind.EXERCISE:
                kind = EventKind.EXERCISE_SUBMISSION
                score = round(rng.uniform(*score_range), 3)
            else:
                kind = AUTO_COMPLETION_TRIGGER[resource.kind]
                score = None
            event = InteractionEvent(
                event_id=event_id,
                student_id=sid,
                resource_id=resource.id,
                kind=kind,
                timestamp=now,
                score=score,
            )
            scratch.ingest(event)
            batch.append(event.to_dict())
            clocks[sid] = now + SIM_STRIDE
    return batch
