"""Plain-file course store: JSON course documents plus JSON-Lines event logs.

Layout under the data directory::

    courses/<course_id>.json    # canonical course document, atomic replace
    events/<course_id>.jsonl    # append-only event log, one event per line

The event file is the durable store of record for interactions; events are
validated at append time, and loading replays whatever the file holds (a
torn final line after a crash is detected and truncated away).  All
mutations to one course are serialized by a per-course lock; queries are
pure functions of the loaded state.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Mapping, Optional

import jsonschema

from .errors import (
    CrossCourseRelation,
    DataDirUnavailable,
    DuplicateId,
    DuplicateLink,
    EngineError,
    GraphInvariantViolation,
    SchemaViolation,
    UnknownCompetency,
    UnknownCourse,
    UnknownResource,
    UnknownStudent,
)
from .events import (
    EventLog,
    InteractionEvent,
    LearningResource,
    ResourceKind,
    exercise_statistics,
    completion_status,
    latest_score,
    participation_status,
)
from .graph import CompetencyGraph, Competency, Taxonomy
from .metrics import (
    CompetencyLink,
    LinkKind,
    MetricConfig,
    competency_progress,
)
from .paths import generate_path, recommend_next
from .timeutil import EPOCH, format_timestamp, parse_timestamp

SCHEMA_VERSION = 1

COURSE_DOCUMENT_SCHEMA: dict = {
    "type": "object",
    "required": ["course_id", "title", "competencies"],
    "additionalProperties": False,
    "properties": {
        "schema_version": {"type": "integer"},
        "course_id": {"type": "string", "minLength": 1},
        "title": {"type": "string"},
        "competencies": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "title", "taxonomy", "threshold"],
                "additionalProperties": False,
                "properties": {
                    "id": {"type": "string", "minLength": 1},
                    "title": {"type": "string", "minLength": 1},
                    "description": {"type": "string"},
                    "taxonomy": {
                        "type": "string",
                        "enum": [t.value for t in Taxonomy],
                    },
                    "threshold": {
                        "type": "number",
                        "exclusiveMinimum": 0,
                        "maximum": 1,
                    },
                },
            },
        },
        "relations": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["tail", "head", "type"],
                "additionalProperties": False,
                "properties": {
                    "id": {"type": "string", "minLength": 1},
                    "tail": {"type": "string", "minLength": 1},
                    "head": {"type": "string", "minLength": 1},
                    "type": {
                        "type": "string",
                        "enum": ["ASSUMES", "EXTENDS", "RELATES", "MATCHES"],
                    },
                },
            },
        },
        "resources": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "kind", "title"],
                "additionalProperties": False,
                "properties": {
                    "id": {"type": "string", "minLength": 1},
                    "kind": {
                        "type": "string",
                        "enum": [k.value for k in ResourceKind],
                    },
                    "title": {"type": "string"},
                    "order_index": {"type": "integer", "minimum": 0},
                    "max_points": {"type": "number", "exclusiveMinimum": 0},
                },
            },
        },
        "links": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["competency_id", "resource_id", "kind"],
                "additionalProperties": False,
                "properties": {
                    "competency_id": {"type": "string", "minLength": 1},
                    "resource_id": {"type": "string", "minLength": 1},
                    "kind": {
                        "type": "string",
                        "enum": ["PREREQUISITE", "LEARNING_GOAL"],
                    },
                },
            },
        },
        "config": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "mastery_weight": {
                    "type": "number",
                    "minimum": 0,
                    "exclusiveMaximum": 1,
                },
            },
        },
        "grants": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["student_id", "competency_id"],
                "additionalProperties": False,
                "properties": {
                    "student_id": {"type": "string", "minLength": 1},
                    "competency_id": {"type": "string", "minLength": 1},
                },
            },
        },
    },
}


@dataclass
class CourseState:
    """In-memory materialization of one course document plus its event log."""

    course_id: str
    title: str
    graph: CompetencyGraph
    resources: dict[str, LearningResource]
    links: dict[tuple[str, str], CompetencyLink]
    config: MetricConfig
    grants: set[tuple[str, str]]
    log: EventLog
    lock: threading.Lock = field(default_factory=threading.Lock)

    def links_for(self, competency_id: str) -> list[CompetencyLink]:
        return [l for l in self.links.values() if l.competency_id == competency_id]

    def grants_for(self, student_id: str) -> set[str]:
        return {cid for sid, cid in self.grants if sid == student_id}


@dataclass(frozen=True)
class AppendResult:
    accepted: int
    duplicates: int
    rejected: list[dict]

    def to_dict(self) -> dict:
        return {
            "accepted": self.accepted,
            "duplicates": self.duplicates,
            "rejected": self.rejected,
        }


@dataclass(frozen=True)
class StoreSnapshot:
    """Point-in-time view: course documents plus event-log byte offsets."""

    schema_version: int
    course_documents: dict[str, dict]
    event_log_offsets: dict[str, int]


class CourseStore:
    """All courses under one data directory."""

    def __init__(self, data_dir: str | os.PathLike):
        self.data_dir = Path(data_dir)
        try:
            self.courses_dir.mkdir(parents=True, exist_ok=True)
            self.events_dir.mkdir(parents=True, exist_ok=True)
            probe = self.data_dir / ".write-probe"
            probe.write_text("")
            probe.unlink()
        except OSError as exc:
            raise DataDirUnavailable(f"data dir {data_dir!s} is not usable: {exc}") from None
        self._states: dict[str, CourseState] = {}
        self._load_all()

    @property
    def courses_dir(self) -> Path:
        return self.data_dir / "courses"

    @property
    def events_dir(self) -> Path:
        return self.data_dir / "events"

    def _event_path(self, course_id: str) -> Path:
        return self.events_dir / f"{course_id}.jsonl"

    def _course_path(self, course_id: str) -> Path:
        return self.courses_dir / f"{course_id}.json"

    # --- loading -----------------------------------------------------------

    def _load_all(self) -> None:
        for path in sorted(self.courses_dir.glob("*.json")):
            document = json.loads(path.read_text(encoding="utf-8"))
            state = self._build_state(document)
            self._replay_events(state)
            self._states[state.course_id] = state

    def _replay_events(self, state: CourseState) -> None:
        """Replay the event file; a torn tail (crash artifact) is truncated."""
        path = self._event_path(state.course_id)
        if not path.exists():
            return
        raw = path.read_bytes()
        valid_offset = 0
        cursor = 0
        while cursor < len(raw):
            newline = raw.find(b"\n", cursor)
            if newline < 0:
                break  # unterminated tail
            line = raw[cursor:newline]
            try:
                record = json.loads(line.decode("utf-8"))
                event = InteractionEvent.from_dict(record)
            except Exception:
                break  # torn or corrupt line; everything after is dropped
            # validated when appended; replay raw so results match pre-crash state
            state.log.ingest(event, validate=False)
            cursor = newline + 1
            valid_offset = cursor
        if valid_offset < len(raw):
            with open(path, "r+b") as fh:
                fh.truncate(valid_offset)

    # --- course documents --------------------------------------------------------

    def course_ids(self) -> list[str]:
        return sorted(self._states)

    def state(self, course_id: str) -> CourseState:
        try:
            return self._states[course_id]
        except KeyError:
            raise UnknownCourse(f"no course {course_id!r}") from None

    def import_course(self, document: Mapping[str, Any]) -> str:
        """Validate and persist a course document.

        Re-importing brings the course to exactly the document's content, so
        importing the same document twice is a no-op; the event log for the
        course id is kept as-is.
        """
        state = self._build_state(document)
        existing = self._states.get(state.course_id)
        if existing is not None:
            state.log = existing.log
            self._rebind_log(state)
        else:
            self._replay_events(state)
        self._states[state.course_id] = state
        self._persist(state)
        return state.course_id

    def _rebind_log(self, state: CourseState) -> None:
        # the log validates against the catalog of its course state
        state.log.bind_resources(state.resources)

    def _build_state(self, document: Mapping[str, Any]) -> CourseState:
        try:
            jsonschema.validate(document, COURSE_DOCUMENT_SCHEMA)
        except jsonschema.ValidationError as exc:
            raise SchemaViolation(
                f"course document invalid at {exc.json_path}: {exc.message}"
            ) from None
        if document.get("schema_version", SCHEMA_VERSION) != SCHEMA_VERSION:
            raise SchemaViolation(
                f"unsupported schema_version {document.get('schema_version')!r}, "
                f"expected {SCHEMA_VERSION}"
            )
        course_id = document["course_id"]
        graph = CompetencyGraph(course_id)
        for item in document["competencies"]:
            if item["id"] in graph.competencies:
                raise SchemaViolation(f"duplicate competency id {item['id']!r}")
            graph.create_competency(
                title=item["title"],
                description=item.get("description", ""),
                taxonomy=item["taxonomy"],
                threshold=item["threshold"],
                competency_id=item["id"],
            )
        for item in document.get("relations", []):
            try:
                graph.add_relation(
                    tail_id=item["tail"],
                    head_id=item["head"],
                    rel_type=item["type"],
                    relation_id=item.get("id"),
                )
            except EngineError as exc:
                raise GraphInvariantViolation(
                    f"relation {item.get('id') or ''}"
                    f"({item['tail']} {item['type']} {item['head']}) rejected: "
                    f"{exc.code}: {exc.message}"
                ) from None
        resources: dict[str, LearningResource] = {}
        for item in document.get("resources", []):
            if item["id"] in resources:
                raise SchemaViolation(f"duplicate resource id {item['id']!r}")
            try:
                resources[item["id"]] = LearningResource(
                    id=item["id"],
                    course_id=course_id,
                    kind=ResourceKind.parse(item["kind"]),
                    title=item.get("title", ""),
                    order_index=item.get("order_index", 0),
                    max_points=item.get("max_points"),
                )
            except EngineError as exc:
                raise SchemaViolation(f"resource {item['id']!r} invalid: {exc.message}") from None
        links: dict[tuple[str, str], CompetencyLink] = {}
        for item in document.get("links", []):
            key = (item["competency_id"], item["resource_id"])
            if key[0] not in graph.competencies:
                raise SchemaViolation(f"link references unknown competency {key[0]!r}")
            if key[1] not in resources:
                raise SchemaViolation(f"link references unknown resource {key[1]!r}")
            if key in links:
                raise SchemaViolation(f"duplicate link {key[0]!r} -> {key[1]!r}")
            links[key] = CompetencyLink(
                competency_id=key[0],
                resource_id=key[1],
                kind=LinkKind.parse(item["kind"]),
            )
        grants: set[tuple[str, str]] = set()
        for item in document.get("grants", []):
            if item["competency_id"] not in graph.competencies:
                raise SchemaViolation(
                    f"grant references unknown competency {item['competency_id']!r}"
                )
            grants.add((item["student_id"], item["competency_id"]))
        config = MetricConfig(**document.get("config", {}))
        state = CourseState(
            course_id=course_id,
            title=document["title"],
            graph=graph,
            resources=resources,
            links=links,
            config=config,
            grants=grants,
            log=EventLog(resources),
        )
        return state

    def export_course_document(self, course_id: str) -> dict:
        """Canonical (sorted, normalized) course document."""
        state = self.state(course_id)
        graph_doc = state.graph.export_document()
        competencies = []
        for node in graph_doc["nodes"]:
            competency = state.graph.competency(node["id"])
            competencies.append(
                {
                    "id": competency.id,
                    "title": competency.title,
                    "description": competency.description,
                    "taxonomy": competency.taxonomy.value,
                    "threshold": competency.mastery_threshold,
                }
            )
        return {
            "schema_version": SCHEMA_VERSION,
            "course_id": state.course_id,
            "title": state.title,
            "competencies": competencies,
            "relations": graph_doc["edges"],
            "resources": [
                self._resource_dict(r)
                for r in sorted(state.resources.values(), key=lambda r: r.id)
            ],
            "links": [
                {
                    "competency_id": l.competency_id,
                    "resource_id": l.resource_id,
                    "kind": l.kind.value,
                }
                for l in sorted(
                    state.links.values(),
                    key=lambda l: (l.competency_id, l.resource_id),
                )
            ],
            "config": {"mastery_weight": state.config.mastery_weight},
            "grants": [
                {"student_id": sid, "competency_id": cid}
                for sid, cid in sorted(state.grants)
            ],
        }

    @staticmethod
    def _resource_dict(resource: LearningResource) -> dict:
        record = {
            "id": resource.id,
            "kind": resource.kind.value,
            "title": resource.title,
            "order_index": resource.order_index,
        }
        if resource.max_points is not None:
            record["max_points"] = resource.max_points
        return record

    def _persist(self, state: CourseState) -> None:
        document = self.export_course_document(state.course_id)
        path = self._course_path(state.course_id)
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(
            json.dumps(document, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
        )
        os.replace(tmp, path)

    def snapshot(self) -> StoreSnapshot:
        offsets = {}
        for course_id in self._states:
            path = self._event_path(course_id)
            offsets[course_id] = path.stat().st_size if path.exists() else 0
        return StoreSnapshot(
            schema_version=SCHEMA_VERSION,
            course_documents={
                cid: self.export_course_document(cid) for cid in self._states
            },
            event_log_offsets=offsets,
        )

    # --- course mutations -------------------------------------------------------

    def create_competency(
        self,
        course_id: str,
        title: str,
        description: str = "",
        taxonomy: str = "UNDERSTAND",
        threshold: float = 0.8,
        competency_id: Optional[str] = None,
    ) -> Competency:
        state = self.state(course_id)
        with state.lock:
            competency = state.graph.create_competency(
                title=title,
                description=description,
                taxonomy=taxonomy,
                threshold=threshold,
                competency_id=competency_id,
            )
            self._persist(state)
            return competency

    def update_competency(self, course_id: str, competency_id: str, **fields) -> Competency:
        state = self.state(course_id)
        with state.lock:
            competency = state.graph.update_competency(competency_id, **fields)
            self._persist(state)
            return competency

    def delete_competency(self, course_id: str, competency_id: str) -> None:
        """Remove the competency plus its relations, links, and grants."""
        state = self.state(course_id)
        with state.lock:
            state.graph.remove_competency(competency_id)
            state.links = {
                key: link
                for key, link in state.links.items()
                if link.competency_id != competency_id
            }
            state.grants = {
                (sid, cid) for sid, cid in state.grants if cid != competency_id
            }
            self._persist(state)

    def add_relation(self, course_id: str, tail_id: str, head_id: str, rel_type: str):
        state = self.state(course_id)
        with state.lock:
            for endpoint in (tail_id, head_id):
                if endpoint not in state.graph.competencies:
                    owner = self._course_owning_competency(endpoint)
                    if owner is not None and owner != course_id:
                        raise CrossCourseRelation(
                            f"competency {endpoint!r} belongs to course {owner!r}, "
                            f"not {course_id!r}"
                        )
            relation = state.graph.add_relation(tail_id, head_id, rel_type)
            self._persist(state)
            return relation

    def _course_owning_competency(self, competency_id: str) -> Optional[str]:
        for course_id, state in self._states.items():
            if competency_id in state.graph.competencies:
                return course_id
        return None

    def remove_relation(self, course_id: str, relation_id: str) -> None:
        state = self.state(course_id)
        with state.lock:
            state.graph.remove_relation(relation_id)
            self._persist(state)

    def add_resource(
        self,
        course_id: str,
        resource_id: str,
        kind: str,
        title: str = "",
        order_index: int = 0,
        max_points: Optional[float] = None,
    ) -> LearningResource:
        state = self.state(course_id)
        with state.lock:
            if resource_id in state.resources:
                raise DuplicateId(f"resource id {resource_id!r} already exists")
            resource = LearningResource(
                id=resource_id,
                course_id=course_id,
                kind=ResourceKind.parse(kind),
                title=title,
                order_index=order_index,
                max_points=max_points,
            )
            state.resources[resource_id] = resource
            self._persist(state)
            return resource

    def add_link(
        self, course_id: str, competency_id: str, resource_id: str, kind: str
    ) -> CompetencyLink:
        state = self.state(course_id)
        with state.lock:
            if competency_id not in state.graph.competencies:
                raise UnknownCompetency(f"no competency {competency_id!r}")
            if resource_id not in state.resources:
                raise UnknownResource(f"no resource {resource_id!r}")
            key = (competency_id, resource_id)
            if key in state.links:
                raise DuplicateLink(
                    f"link {competency_id!r} -> {resource_id!r} already exists"
                )
            link = CompetencyLink(
                competency_id=competency_id,
                resource_id=resource_id,
                kind=LinkKind.parse(kind),
            )
            state.links[key] = link
            self._persist(state)
            return link

    def add_grant(self, course_id: str, student_id: str, competency_id: str) -> None:
        state = self.state(course_id)
        with state.lock:
            _require_student_id(student_id)
            if competency_id not in state.graph.competencies:
                raise UnknownCompetency(f"no competency {competency_id!r}")
            state.grants.add((student_id, competency_id))
            self._persist(state)

    # --- events -------------------------------------------------------------------

    def append_events(self, course_id: str, batch: list[Mapping]) -> AppendResult:
        """Validate and append a batch; accepted events are written in one
        write so a crash leaves either none or all of them."""
        state = self.state(course_id)
        with state.lock:
            accepted: list[InteractionEvent] = []
            rejected: list[dict] = []
            duplicates = 0
            seen_ids = set()
            for index, record in enumerate(batch):
                try:
                    event = InteractionEvent.from_dict(record)
                except EngineError as exc:
                    rejected.append(_rejection(index, record, exc.code, exc.message))
                    continue
                except (KeyError, TypeError, ValueError) as exc:
                    rejected.append(
                        _rejection(index, record, "SCHEMA_VIOLATION", str(exc))
                    )
                    continue
                if event.event_id in seen_ids:
                    duplicates += 1
                    continue
                try:
                    if state.log.ingest(event):
                        accepted.append(event)
                        seen_ids.add(event.event_id)
                    else:
                        duplicates += 1
                except EngineError as exc:
                    rejected.append(_rejection(index, record, exc.code, exc.message))
            if accepted:
                lines = "".join(
                    json.dumps(e.to_dict(), ensure_ascii=False) + "\n" for e in accepted
                )
                path = self._event_path(course_id)
                with open(path, "a", encoding="utf-8") as fh:
                    fh.write(lines)
                    fh.flush()
                    os.fsync(fh.fileno())
            return AppendResult(
                accepted=len(accepted), duplicates=duplicates, rejected=rejected
            )

    def default_query_time(self, course_id: str) -> datetime:
        """Latest event timestamp, or the Unix epoch for an empty log; never
        the wall clock, so queries stay reproducible."""
        latest = self.state(course_id).log.latest_timestamp()
        return latest if latest is not None else EPOCH

    # --- queries -------------------------------------------------------------------

    def graph_document(self, course_id: str) -> dict:
        return self.state(course_id).graph.export_document()

    def progress_report(
        self, course_id: str, student_id: str, query_time: Optional[datetime] = None
    ) -> dict:
        state = self.state(course_id)
        _require_student_id(student_id)
        at = query_time or self.default_query_time(course_id)
        competencies = [
            competency_progress(
                student_id,
                competency,
                state.links_for(cid),
                state.resources,
                state.log,
                state.config,
                at,
                manual_grant=(student_id, cid) in state.grants,
            ).to_dict()
            for cid, competency in sorted(state.graph.competencies.items())
        ]
        return {
            "course_id": course_id,
            "student_id": student_id,
            "query_time": format_timestamp(at),
            "competencies": competencies,
            "resources": self._resource_statuses(state, student_id, at),
        }

    def _resource_statuses(
        self, state: CourseState, student_id: str, at: datetime
    ) -> list[dict]:
        """Per-resource completion/participation, for checkbox rendering."""
        rows = []
        for resource in sorted(
            state.resources.values(), key=lambda r: (r.order_index, r.id)
        ):
            row = {
                "resource_id": resource.id,
                "kind": resource.kind.value,
                "title": resource.title,
                "order_index": resource.order_index,
            }
            if resource.kind is ResourceKind.EXERCISE:
                row["participated"] = participation_status(
                    state.log, student_id, resource, upto=at
                )
                row["latest_score"] = latest_score(state.log, student_id, resource, upto=at)
            else:
                status = completion_status(state.log, student_id, resource, at)
                row["completed"] = status.completed
                row["source"] = status.source.value
            rows.append(row)
        return rows

    def learning_path(
        self, course_id: str, student_id: str, query_time: Optional[datetime] = None
    ) -> dict:
        state = self.state(course_id)
        _require_student_id(student_id)
        at = query_time or self.default_query_time(course_id)
        path = generate_path(
            student_id,
            state.graph,
            state.links.values(),
            state.resources,
            state.log,
            state.config,
            at,
            grants=state.grants_for(student_id),
        )
        return path.to_dict()

    def next_recommendation(
        self, course_id: str, student_id: str, query_time: Optional[datetime] = None
    ) -> Optional[str]:
        state = self.state(course_id)
        _require_student_id(student_id)
        at = query_time or self.default_query_time(course_id)
        return recommend_next(
            student_id,
            state.graph,
            state.links.values(),
            state.resources,
            state.log,
            state.config,
            at,
            grants=state.grants_for(student_id),
        )

    def exercise_statistics(
        self, course_id: str, exercise_id: str, student_id: Optional[str] = None
    ) -> dict:
        state = self.state(course_id)
        resource = state.resources.get(exercise_id)
        if resource is None:
            raise UnknownResource(f"no resource {exercise_id!r} in course {course_id!r}")
        return exercise_statistics(state.log, resource, student_id).to_dict()

    def report(
        self, course_id: str, student_id: str, query_time: Optional[datetime] = None
    ) -> dict:
        """Full student report: per-competency metrics plus the current path."""
        at = query_time or self.default_query_time(course_id)
        progress = self.progress_report(course_id, student_id, at)
        return {
            "course_id": course_id,
            "student_id": student_id,
            "query_time": format_timestamp(at),
            "competencies": progress["competencies"],
            "resources": progress["resources"],
            "learning_path": self.learning_path(course_id, student_id, at),
        }


def _require_student_id(student_id: str) -> None:
    # students are implied by events, not registered entities; the only
    # malformed case is a blank id
    if not student_id or not student_id.strip():
        raise UnknownStudent("student id must be non-empty")


def _rejection(index: int, record: Mapping, code: str, message: str) -> dict:
    entry = {"index": index, "code": code, "message": message}
    event_id = record.get("event_id") if isinstance(record, Mapping) else None
    if event_id is not None:
        entry["event_id"] = event_id
    return entry


def parse_query_time(value: Optional[str]) -> Optional[datetime]:
    """Parse an optional ``?at=`` / ``--at`` argument."""
    if value is None or value == "":
        return None
    return parse_timestamp(value)
