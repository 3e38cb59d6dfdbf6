"""Event log: ingestion rules, completion folds, scores, statistics."""

from __future__ import annotations

import random
from datetime import timedelta

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from competency_engine.errors import (
    ExerciseNotSupported,
    KindMismatch,
    NotAnExercise,
    ScoreMissing,
    ScoreOutOfRange,
    ScoreUnexpected,
    UnknownResource,
)
from competency_engine.events import (
    CompletionSource,
    EventKind,
    EventLog,
    InteractionEvent,
    LearningResource,
    ResourceKind,
    completion_status,
    exercise_statistics,
    latest_score,
    participation_status,
)

from conftest import T0
from oracles import completion_oracle

RESOURCES = {
    "file": LearningResource("file", "c1", ResourceKind.FILE_UNIT, "slides"),
    "text": LearningResource("text", "c1", ResourceKind.TEXT_UNIT, "notes"),
    "online": LearningResource("online", "c1", ResourceKind.ONLINE_UNIT, "link"),
    "video": LearningResource("video", "c1", ResourceKind.VIDEO_UNIT, "lecture"),
    "quiz": LearningResource("quiz", "c1", ResourceKind.EXERCISE, "quiz", max_points=10),
}


def fresh_log() -> EventLog:
    return EventLog(RESOURCES)


def ev(event_id, resource_id, kind, minutes=0.0, student="s1", score=None, seconds=0.0):
    return InteractionEvent(
        event_id=event_id,
        student_id=student,
        resource_id=resource_id,
        kind=EventKind.parse(kind),
        timestamp=T0 + timedelta(minutes=minutes, seconds=seconds),
        score=score,
    )


# --- ingestion -------------------------------------------------------------


def test_reingest_same_event_is_noop():
    log = fresh_log()
    event = ev("e1", "file", "DOWNLOAD_CLICK")
    assert log.ingest(event) is True
    assert log.ingest(event) is False
    assert len(log) == 1


def test_kind_mismatch_rejected():
    log = fresh_log()
    with pytest.raises(KindMismatch):
        log.ingest(ev("e1", "text", "DOWNLOAD_CLICK"))
    with pytest.raises(KindMismatch):
        log.ingest(ev("e2", "quiz", "MANUAL_TOGGLE"))
    with pytest.raises(KindMismatch):
        log.ingest(ev("e3", "file", "EXERCISE_SUBMISSION", score=0.5))


def test_unknown_resource_rejected():
    log = fresh_log()
    with pytest.raises(UnknownResource):
        log.ingest(ev("e1", "ghost", "MANUAL_TOGGLE"))


def test_submission_score_validation():
    with pytest.raises(ScoreMissing):
        ev("e1", "quiz", "EXERCISE_SUBMISSION")
    with pytest.raises(ScoreOutOfRange):
        ev("e2", "quiz", "EXERCISE_SUBMISSION", score=1.2)
    with pytest.raises(ScoreUnexpected):
        ev("e3", "file", "DOWNLOAD_CLICK", score=0.5)


def test_submission_appended_and_reproduced_by_latest_score():
    log = fresh_log()
    log.ingest(ev("e1", "quiz", "EXERCISE_SUBMISSION", score=0.85))
    assert latest_score(log, "s1", RESOURCES["quiz"]) == 0.85


# --- completion folds ------------------------------------------------------------


def status(log, resource_id, minutes, student="s1", seconds=0.0):
    return completion_status(
        log,
        student,
        RESOURCES[resource_id],
        T0 + timedelta(minutes=minutes, seconds=seconds),
    )


def test_video_incomplete_before_five_minutes():
    log = fresh_log()
    log.ingest(ev("e1", "video", "VIDEO_REVEAL"))
    assert status(log, "video", 4, seconds=59).completed is False


def test_video_complete_at_exactly_five_minutes():
    log = fresh_log()
    log.ingest(ev("e1", "video", "VIDEO_REVEAL"))
    result = status(log, "video", 5)
    assert result.completed is True
    assert result.source is CompletionSource.AUTOMATIC
    assert result.effective_at == T0 + timedelta(minutes=5)


def test_file_download_then_toggle_uncompletes():
    # fold by hand: auto-complete at t0, toggle flips it at t0+1m
    log = fresh_log()
    log.ingest(ev("e1", "file", "DOWNLOAD_CLICK", minutes=0))
    log.ingest(ev("e2", "file", "MANUAL_TOGGLE", minutes=1))
    result = status(log, "file", 2)
    assert result.completed is False
    assert result.source is CompletionSource.MANUAL
    assert result.effective_at == T0 + timedelta(minutes=1)


def test_unit_without_events_is_incomplete():
    result = status(fresh_log(), "text", 10)
    assert result == result.__class__(False, CompletionSource.NONE, None)


def test_each_unit_kind_completes_on_its_trigger():
    for resource_id, kind in [
        ("file", "DOWNLOAD_CLICK"),
        ("text", "TEXT_OPEN"),
        ("online", "LINK_CLICK"),
    ]:
        log = fresh_log()
        log.ingest(ev("e1", resource_id, kind))
        result = status(log, resource_id, 0)
        assert result.completed and result.source is CompletionSource.AUTOMATIC


def test_toggle_before_video_maturity_suppresses_auto():
    # toggle completes at +1m; the +5m automatic change finds the unit
    # already complete and must not fire, so a later toggle wins for good
    log = fresh_log()
    log.ingest(ev("e1", "video", "VIDEO_REVEAL", minutes=0))
    log.ingest(ev("e2", "video", "MANUAL_TOGGLE", minutes=1))
    assert status(log, "video", 2).completed is True
    assert status(log, "video", 5).completed is True
    log.ingest(ev("e3", "video", "MANUAL_TOGGLE", minutes=6))
    result = status(log, "video", 7)
    assert result.completed is False
    assert result.source is CompletionSource.MANUAL


def test_completion_is_per_student():
    log = fresh_log()
    log.ingest(ev("e1", "file", "DOWNLOAD_CLICK", student="s1"))
    assert status(log, "file", 1, student="s1").completed is True
    assert status(log, "file", 1, student="s2").completed is False


def test_completion_undefined_for_exercises():
    with pytest.raises(ExerciseNotSupported):
        completion_status(fresh_log(), "s1", RESOURCES["quiz"], T0)


# --- participation and scores ---------------------------------------------------------


def test_participation_requires_a_submission():
    log = fresh_log()
    assert participation_status(log, "s1", RESOURCES["quiz"]) is False
    log.ingest(ev("e1", "quiz", "EXERCISE_SUBMISSION", score=0.0))
    assert participation_status(log, "s1", RESOURCES["quiz"]) is True


def test_participation_with_three_submissions():
    log = fresh_log()
    for i in range(3):
        log.ingest(ev(f"e{i}", "quiz", "EXERCISE_SUBMISSION", minutes=i, score=0.5))
    assert participation_status(log, "s1", RESOURCES["quiz"]) is True


def test_participation_rejects_units():
    with pytest.raises(NotAnExercise):
        participation_status(fresh_log(), "s1", RESOURCES["file"])


def test_latest_score_takes_greatest_timestamp():
    log = fresh_log()
    log.ingest(ev("e1", "quiz", "EXERCISE_SUBMISSION", minutes=1, score=0.4))
    log.ingest(ev("e2", "quiz", "EXERCISE_SUBMISSION", minutes=2, score=0.9))
    assert latest_score(log, "s1", RESOURCES["quiz"]) == 0.9


def test_latest_score_absent_without_submissions():
    assert latest_score(fresh_log(), "s1", RESOURCES["quiz"]) is None


def test_latest_score_tie_breaks_by_event_id():
    log = fresh_log()
    log.ingest(ev("e2", "quiz", "EXERCISE_SUBMISSION", minutes=1, score=0.7))
    log.ingest(ev("e1", "quiz", "EXERCISE_SUBMISSION", minutes=1, score=0.3))
    assert latest_score(log, "s1", RESOURCES["quiz"]) == 0.7


# --- exercise statistics ------------------------------------------------------------------


def test_course_average_of_latest_scores():
    log = fresh_log()
    log.ingest(ev("e1", "quiz", "EXERCISE_SUBMISSION", student="s1", minutes=0, score=0.2))
    log.ingest(ev("e2", "quiz", "EXERCISE_SUBMISSION", student="s1", minutes=1, score=0.5))
    log.ingest(ev("e3", "quiz", "EXERCISE_SUBMISSION", student="s2", minutes=2, score=1.0))
    stats = exercise_statistics(log, RESOURCES["quiz"])
    assert stats.participant_count == 2
    assert stats.course_average == pytest.approx((0.5 + 1.0) / 2)


def test_statistics_without_participants():
    stats = exercise_statistics(fresh_log(), RESOURCES["quiz"], student_id="s1")
    assert stats.participant_count == 0
    assert stats.course_average == 0.0
    assert stats.student_score is None
    assert stats.student_vs_average is None
    assert "student_score" not in stats.to_dict()


def test_student_vs_average_is_signed_difference():
    log = fresh_log()
    for sid, score in [("s1", 0.6), ("s2", 0.75), ("s3", 0.9)]:
        log.ingest(
            ev(f"e-{sid}", "quiz", "EXERCISE_SUBMISSION", student=sid, score=score)
        )
    stats = exercise_statistics(log, RESOURCES["quiz"], student_id="s3")
    assert stats.course_average == pytest.approx(0.75)
    assert stats.student_score == pytest.approx(0.9)
    assert stats.student_vs_average == pytest.approx(0.15)


def test_statistics_rejects_units():
    with pytest.raises(NotAnExercise):
        exercise_statistics(fresh_log(), RESOURCES["file"])


# --- properties -----------------------------------------------------------------------------


unit_ids = ["file", "text", "online", "video"]


def random_unit_events(rng: random.Random, resource_id: str, n: int):
    trigger = {
        "file": "DOWNLOAD_CLICK",
        "text": "TEXT_OPEN",
        "online": "LINK_CLICK",
        "video": "VIDEO_REVEAL",
    }[resource_id]
    events = []
    for i in range(n):
        kind = rng.choice([trigger, "MANUAL_TOGGLE", "MANUAL_TOGGLE"])
        events.append(
            ev(f"r{i:03d}", resource_id, kind, minutes=rng.randint(0, 60), seconds=rng.random())
        )
    return events


@pytest.mark.parametrize("seed", range(40))
def test_completion_matches_independent_oracle(seed):
    rng = random.Random(seed)
    resource_id = rng.choice(unit_ids)
    events = random_unit_events(rng, resource_id, rng.randint(0, 8))
    log = fresh_log()
    log.ingest_all(events)
    for _ in range(5):
        query = T0 + timedelta(minutes=rng.randint(0, 70), seconds=rng.random())
        got = completion_status(log, "s1", RESOURCES[resource_id], query)
        want_completed, want_source = completion_oracle(
            [(e.timestamp, e.event_id, e.kind.value) for e in events],
            RESOURCES[resource_id].kind.value,
            query,
        )
        assert got.completed == want_completed
        assert got.source.value == want_source


@given(st.integers(0, 10_000), st.integers(2, 10))
@settings(max_examples=60, deadline=None)
def test_ingestion_is_idempotent_and_order_insensitive(seed, n):
    rng = random.Random(seed)
    resource_id = rng.choice(unit_ids)
    events = random_unit_events(rng, resource_id, n)
    multiset = events + rng.sample(events, k=min(3, len(events)))
    rng.shuffle(multiset)

    log_a = fresh_log()
    log_a.ingest_all(multiset)
    log_b = fresh_log()
    log_b.ingest_all(sorted(events, key=lambda e: e.event_id, reverse=True))

    assert [e.event_id for e in log_a] == [e.event_id for e in log_b]
    query = T0 + timedelta(minutes=30)
    assert completion_status(log_a, "s1", RESOURCES[resource_id], query) == \
        completion_status(log_b, "s1", RESOURCES[resource_id], query)


@given(st.integers(0, 10_000))
@settings(max_examples=60, deadline=None)
def test_automatic_completion_is_monotone_without_toggles(seed):
    rng = random.Random(seed)
    resource_id = rng.choice(unit_ids)
    events = [
        e
        for e in random_unit_events(rng, resource_id, rng.randint(1, 6))
        if e.kind is not EventKind.MANUAL_TOGGLE
    ]
    log = fresh_log()
    log.ingest_all(events)
    previous = False
    for minute in range(0, 75, 5):
        now = completion_status(
            log, "s1", RESOURCES[resource_id], T0 + timedelta(minutes=minute)
        ).completed
        assert now >= previous, "completion regressed without any toggle"
        previous = now


@given(st.integers(0, 10_000))
@settings(max_examples=60, deadline=None)
def test_double_toggle_restores_completed_value(seed):
    rng = random.Random(seed)
    resource_id = rng.choice(unit_ids)
    events = random_unit_events(rng, resource_id, rng.randint(0, 6))
    log = fresh_log()
    log.ingest_all(events)
    before = completion_status(
        log, "s1", RESOURCES[resource_id], T0 + timedelta(hours=3)
    ).completed
    log.ingest(ev("tog-1", resource_id, "MANUAL_TOGGLE", minutes=120))
    log.ingest(ev("tog-2", resource_id, "MANUAL_TOGGLE", minutes=121))
    after = completion_status(
        log, "s1", RESOURCES[resource_id], T0 + timedelta(hours=3)
    ).completed
    assert after == before


@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 100)), max_size=12))
@settings(max_examples=60, deadline=None)
def test_course_average_matches_brute_force_mean(pairs):
    log = fresh_log()
    latest: dict[str, float] = {}
    for i, (student_index, pct) in enumerate(pairs):
        student = f"s{student_index}"
        score = pct / 100
        log.ingest(
            ev(f"e{i:03d}", "quiz", "EXERCISE_SUBMISSION", student=student, minutes=i, score=score)
        )
        latest[student] = score
    stats = exercise_statistics(log, RESOURCES["quiz"])
    assert 0.0 <= stats.course_average <= 1.0
    expected = sum(latest.values()) / len(latest) if latest else 0.0
    assert stats.course_average == pytest.approx(expected)
    assert stats.participant_count == len(latest)
