"""Operator CLI: serve the HTTP API, import courses, simulate students,
print reports."""

from __future__ import annotations

import json
import sys

import click

from .errors import EngineError
from .store import CourseStore, parse_query_time


def _data_dir_option(fn):
    return click.option(
        "--data-dir",
        envvar="DATA_DIR",
        default="data",
        show_default=True,
        help="Storage directory (env: DATA_DIR).",
    )(fn)


@click.group()
def main():
    """Competency-based education engine."""


@main.command()
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
@_data_dir_option
def serve(port: int, host: str, data_dir: str):
    """Run the HTTP service."""
    from .service import serve as run_service

    try:
        run_service(port=port, data_dir=data_dir, host=host)
    except EngineError as exc:
        raise click.ClickException(f"{exc.code}: {exc.message}")


@main.command("import")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@_data_dir_option
def import_course(file: str, data_dir: str):
    """Import a course document from FILE."""
    with open(file, encoding="utf-8") as fh:
        document = json.load(fh)
    try:
        store = CourseStore(data_dir)
        course_id = store.import_course(document)
    except EngineError as exc:
        raise click.ClickException(f"{exc.code}: {exc.message}")
    click.echo(course_id)


@main.command()
@click.option("--course", required=True, help="Course id.")
@click.option("--students", default=1, show_default=True, type=int)
@click.option("--steps", default=10, show_default=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--emit", type=click.Path(dir_okay=False), help="Write the batch to this JSONL file.")
@click.option("--post", "post_url", help="POST the batch (JSON array) to this URL.")
@_data_dir_option
def simulate(course, students, steps, seed, emit, post_url, data_dir):
    """Generate a deterministic student-behavior event batch.

    Without --emit/--post the batch is printed as JSON Lines on stdout.
    """
    from .simulate import simulate as run_simulation

    try:
        store = CourseStore(data_dir)
        batch = run_simulation(store, course, students, steps, seed)
    except EngineError as exc:
        raise click.ClickException(f"{exc.code}: {exc.message}")
    lines = "".join(json.dumps(event, ensure_ascii=False) + "\n" for event in batch)
    if emit:
        with open(emit, "w", encoding="utf-8") as fh:
            fh.write(lines)
        click.echo(f"wrote {len(batch)} events to {emit}", err=True)
    elif post_url:
        import httpx

        response = httpx.post(post_url, json=batch, timeout=30.0)
        click.echo(response.text)
        if response.status_code >= 400:
            sys.exit(1)
    else:
        click.echo(lines, nl=False)


@main.command()
@click.option("--course", required=True, help="Course id.")
@click.option("--student", required=True, help="Student id.")
@click.option("--at", "at_ts", default=None, help="Query time (ISO-8601 UTC).")
@_data_dir_option
def report(course, student, at_ts, data_dir):
    """Print the full progress + learning-path report for one student."""
    try:
        store = CourseStore(data_dir)
        document = store.report(course, student, parse_query_time(at_ts))
    except EngineError as exc:
        raise click.ClickException(f"{exc.code}: {exc.message}")
    click.echo(json.dumps(document, indent=2, ensure_ascii=False))


if __name__ == "__main__":
    main()
