"""HTTP service exposing the engine over JSON.

Every handler delegates to the store and returns exactly what the library
returns, so endpoint bodies and core-operation outputs stay equal by
construction.  Errors surface as ``{"code", "message"}`` bodies with stable
machine-readable codes.
"""

from __future__ import annotations

import socket
from typing import Optional, Union

from fastapi import Body, FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .errors import EngineError, PortInUse, SchemaViolation
from .store import CourseStore, parse_query_time

NOT_FOUND_CODES = {
    "UNKNOWN_COURSE",
    "UNKNOWN_COMPETENCY",
    "UNKNOWN_RELATION",
    "UNKNOWN_RESOURCE",
    "UNKNOWN_STUDENT",
}
CONFLICT_CODES = {
    "REFLEXIVE_RELATION",
    "DUPLICATE_RELATION",
    "CYCLE_INTRODUCED",
    "CROSS_COURSE_RELATION",
    "DUPLICATE_ID",
    "DUPLICATE_LINK",
}


def status_for(error: EngineError) -> int:
    if error.code in NOT_FOUND_CODES:
        return 404
    if error.code in CONFLICT_CODES:
        return 409
    return 400


def create_app(store: CourseStore) -> FastAPI:
    app = FastAPI(title="competency-engine", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(EngineError)
    async def engine_error_handler(_request: Request, error: EngineError):
        return JSONResponse(status_code=status_for(error), content=error.to_dict())

    # --- courses ------------------------------------------------------------

    @app.post("/courses", status_code=201)
    def import_course(document: dict = Body(...)):
        course_id = store.import_course(document)
        return {"course_id": course_id}

    @app.get("/courses/{course_id}")
    def get_course(course_id: str):
        return store.export_course_document(course_id)

    @app.get("/courses/{course_id}/graph")
    def get_graph(course_id: str):
        return store.graph_document(course_id)

    # --- competencies --------------------------------------------------------

    @app.post("/courses/{course_id}/competencies", status_code=201)
    def create_competency(course_id: str, payload: dict = Body(...)):
        competency = store.create_competency(
            course_id,
            title=payload.get("title", ""),
            description=payload.get("description", ""),
            taxonomy=payload.get("taxonomy", "UNDERSTAND"),
            threshold=payload.get("threshold", 0.8),
            competency_id=payload.get("id"),
        )
        return _competency_dict(competency)

    @app.patch("/courses/{course_id}/competencies/{competency_id}")
    def update_competency(course_id: str, competency_id: str, payload: dict = Body(...)):
        fields = {
            key: payload[key]
            for key in ("title", "description", "taxonomy", "threshold")
            if key in payload
        }
        competency = store.update_competency(course_id, competency_id, **fields)
        return _competency_dict(competency)

    @app.delete("/courses/{course_id}/competencies/{competency_id}", status_code=204)
    def delete_competency(course_id: str, competency_id: str):
        store.delete_competency(course_id, competency_id)

    # --- relations ------------------------------------------------------------

    @app.post("/courses/{course_id}/relations", status_code=201)
    def add_relation(course_id: str, payload: dict = Body(...)):
        for key in ("tail", "head", "type"):
            if key not in payload:
                raise SchemaViolation(f"relation payload is missing {key!r}")
        try:
            relation = store.add_relation(
                course_id, payload["tail"], payload["head"], payload["type"]
            )
        except ValueError as exc:
            raise SchemaViolation(str(exc)) from None
        return {
            "id": relation.id,
            "tail": relation.tail_id,
            "head": relation.head_id,
            "type": relation.type.value,
        }

    @app.delete("/courses/{course_id}/relations/{relation_id}", status_code=204)
    def remove_relation(course_id: str, relation_id: str):
        store.remove_relation(course_id, relation_id)

    # --- resources and links ----------------------------------------------------

    @app.post("/courses/{course_id}/resources", status_code=201)
    def add_resource(course_id: str, payload: dict = Body(...)):
        for key in ("id", "kind"):
            if key not in payload:
                raise SchemaViolation(f"resource payload is missing {key!r}")
        try:
            resource = store.add_resource(
                course_id,
                resource_id=payload["id"],
                kind=payload["kind"],
                title=payload.get("title", ""),
                order_index=payload.get("order_index", 0),
                max_points=payload.get("max_points"),
            )
        except ValueError as exc:
            raise SchemaViolation(str(exc)) from None
        return CourseStore._resource_dict(resource)

    @app.post("/courses/{course_id}/links", status_code=201)
    def add_link(course_id: str, payload: dict = Body(...)):
        for key in ("competency_id", "resource_id", "kind"):
            if key not in payload:
                raise SchemaViolation(f"link payload is missing {key!r}")
        try:
            link = store.add_link(
                course_id,
                competency_id=payload["competency_id"],
                resource_id=payload["resource_id"],
                kind=payload["kind"],
            )
        except ValueError as exc:
            raise SchemaViolation(str(exc)) from None
        return {
            "competency_id": link.competency_id,
            "resource_id": link.resource_id,
            "kind": link.kind.value,
        }

    # --- grants --------------------------------------------------------------------

    @app.post("/courses/{course_id}/grants", status_code=201)
    def add_grant(course_id: str, payload: dict = Body(...)):
        for key in ("student_id", "competency_id"):
            if key not in payload:
                raise SchemaViolation(f"grant payload is missing {key!r}")
        store.add_grant(course_id, payload["student_id"], payload["competency_id"])
        return {
            "student_id": payload["student_id"],
            "competency_id": payload["competency_id"],
        }

    # --- events ----------------------------------------------------------------------

    @app.post("/courses/{course_id}/events")
    def append_events(course_id: str, payload: Union[list, dict] = Body(...)):
        batch = payload.get("events", []) if isinstance(payload, dict) else payload
        if not isinstance(batch, list):
            raise SchemaViolation("event batch must be a JSON array")
        return store.append_events(course_id, batch).to_dict()

    # --- student queries ----------------------------------------------------------------

    @app.get("/courses/{course_id}/students/{student_id}/progress")
    def student_progress(course_id: str, student_id: str, at: Optional[str] = None):
        return store.progress_report(course_id, student_id, parse_query_time(at))

    @app.get("/courses/{course_id}/students/{student_id}/learning-path")
    def student_learning_path(course_id: str, student_id: str, at: Optional[str] = None):
        return store.learning_path(course_id, student_id, parse_query_time(at))

    @app.get("/courses/{course_id}/students/{student_id}/report")
    def student_report(course_id: str, student_id: str, at: Optional[str] = None):
        return store.report(course_id, student_id, parse_query_time(at))

    @app.get("/courses/{course_id}/exercises/{exercise_id}/statistics")
    def statistics(course_id: str, exercise_id: str, student: Optional[str] = None):
        return store.exercise_statistics(course_id, exercise_id, student)

    return app


def serve(port: int, data_dir: str, host: str = "127.0.0.1") -> None:
    """Run the service with uvicorn; raises PortInUse before starting if the
    port cannot be bound."""
    import uvicorn

    store = CourseStore(data_dir)
    with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as probe:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        try:
            probe.bind((host, port))
        except OSError as exc:
            raise PortInUse(f"cannot bind {host}:{port}: {exc}") from None
    app = create_app(store)
    uvicorn.run(app, host=host, port=port, log_level="info")


def _competency_dict(competency) -> dict:
    return {
        "id": competency.id,
        "course_id": competency.course_id,
        "title": competency.title,
        "description": competency.description,
        "taxonomy": competency.taxonomy.value,
        "threshold": competency.mastery_threshold,
    }
