"""Closed loop: import a course, simulate students, watch mastery converge.

Run with:  python3 demos/closed_loop.py
"""

import tempfile
from datetime import timedelta

from competency_engine import CourseStore, simulate
from competency_engine.timeutil import parse_timestamp

COURSE = {
    "course_id": "demo",
    "title": "Closed-loop demo",
    "competencies": [
        {"id": "A", "title": "Basics", "taxonomy": "UNDERSTAND", "threshold": 0.8},
        {"id": "B", "title": "Advanced", "taxonomy": "APPLY", "threshold": 0.8},
    ],
    "relations": [{"tail": "B", "head": "A", "type": "ASSUMES"}],
    "resources": [
        {"id": "u-a", "kind": "TEXT_UNIT", "title": "Reading", "order_index": 0},
        {"id": "x-a", "kind": "EXERCISE", "title": "Quiz A", "order_index": 1, "max_points": 10},
        {"id": "u-b", "kind": "VIDEO_UNIT", "title": "Video", "order_index": 0},
        {"id": "x-b", "kind": "EXERCISE", "title": "Quiz B", "order_index": 1, "max_points": 10},
    ],
    "links": [
        {"competency_id": "A", "resource_id": "u-a", "kind": "PREREQUISITE"},
        {"competency_id": "A", "resource_id": "x-a", "kind": "LEARNING_GOAL"},
        {"competency_id": "B", "resource_id": "u-b", "kind": "PREREQUISITE"},
        {"competency_id": "B", "resource_id": "x-b", "kind": "LEARNING_GOAL"},
    ],
}

with tempfile.TemporaryDirectory() as tmp:
    store = CourseStore(tmp)
    course_id = store.import_course(COURSE)

    batch = simulate(store, course_id, student_count=3, steps=10, seed=42)
    print(f"simulated {len(batch)} events; first few:")
    for event in batch[:4]:
        print("  ", event)
    store.append_events(course_id, batch)

    horizon = parse_timestamp(max(e["timestamp"] for e in batch)) + timedelta(minutes=6)
    for student in ("student-001", "student-002", "student-003"):
        report = store.report(course_id, student, horizon)
        rings = {
            c["competency_id"]: round(c["rings"]["red"], 3)
            for c in report["competencies"]
        }
        pending = [e["cluster_id"] for e in report["learning_path"]["entries"]]
        print(f"{student}: red rings {rings}, pending clusters {pending}")
