"""Shared fixtures and the acceptance-criteria summary printer."""

from __future__ import annotations

import re
import sys
from datetime import datetime, timezone

import pytest

sys.path.insert(0, str(__import__("pathlib").Path(__file__).parent))

T0 = datetime(2026, 3, 2, 9, 0, 0, tzinfo=timezone.utc)


def make_course_document(course_id: str = "course-1") -> dict:
    """Two-competency fixture: B assumes A, each with one unit and one exercise."""
    return {
        "course_id": course_id,
        "title": "Algorithms 101",
        "competencies": [
            {"id": "A", "title": "Iteration", "description": "", "taxonomy": "APPLY", "threshold": 0.8},
            {"id": "B", "title": "Recursion", "description": "", "taxonomy": "APPLY", "threshold": 0.8},
        ],
        "relations": [{"tail": "B", "head": "A", "type": "ASSUMES"}],
        "resources": [
            {"id": "unit-a", "kind": "TEXT_UNIT", "title": "Reading A", "order_index": 0},
            {"id": "ex-a", "kind": "EXERCISE", "title": "Quiz A", "order_index": 1, "max_points": 10},
            {"id": "unit-b", "kind": "VIDEO_UNIT", "title": "Video B", "order_index": 0},
            {"id": "ex-b", "kind": "EXERCISE", "title": "Quiz B", "order_index": 1, "max_points": 5},
        ],
        "links": [
            {"competency_id": "A", "resource_id": "unit-a", "kind": "PREREQUISITE"},
            {"competency_id": "A", "resource_id": "ex-a", "kind": "LEARNING_GOAL"},
            {"competency_id": "B", "resource_id": "unit-b", "kind": "PREREQUISITE"},
            {"competency_id": "B", "resource_id": "ex-b", "kind": "LEARNING_GOAL"},
        ],
    }


@pytest.fixture
def course_document() -> dict:
    return make_course_document()


@pytest.fixture
def store(tmp_path, course_document):
    from competency_engine import CourseStore

    s = CourseStore(tmp_path / "data")
    s.import_course(course_document)
    return s


# --- acceptance summary ------------------------------------------------------

_AC_RESULTS: dict[str, str] = {}
_AC_PATTERN = re.compile(r"test_acceptance\.py::test_(ac\d+)")


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    match = _AC_PATTERN.search(report.nodeid)
    if match:
        key = match.group(1).upper().replace("AC", "AC-")
        _AC_RESULTS[key] = report.outcome


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _AC_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_AC_RESULTS, key=lambda k: int(k.split("-")[1])):
        outcome = _AC_RESULTS[key]
        label = "PASS" if outcome == "passed" else outcome.upper()
        terminalreporter.write_line(f"{key}: {label}")
