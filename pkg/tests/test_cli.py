"""CLI: import, simulate, report, serve failure modes."""

from __future__ import annotations

import json
import socket

import pytest
from click.testing import CliRunner

from competency_engine.cli import main

from conftest import make_course_document


@pytest.fixture
def runner():
    return CliRunner()


def write_document(tmp_path):
    path = tmp_path / "course.json"
    path.write_text(json.dumps(make_course_document()))
    return path


def test_import_prints_course_id(runner, tmp_path):
    doc = write_document(tmp_path)
    result = runner.invoke(
        main, ["import", str(doc), "--data-dir", str(tmp_path / "data")]
    )
    assert result.exit_code == 0, result.output
    assert result.output.strip() == "course-1"


def test_import_invalid_document_fails(runner, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"course_id": "x"}))
    result = runner.invoke(main, ["import", str(path), "--data-dir", str(tmp_path / "d")])
    assert result.exit_code != 0
    assert "SCHEMA_VIOLATION" in result.output


def test_simulate_stdout_and_emit_agree(runner, tmp_path):
    doc = write_document(tmp_path)
    data_dir = str(tmp_path / "data")
    assert runner.invoke(main, ["import", str(doc), "--data-dir", data_dir]).exit_code == 0

    args = ["simulate", "--course", "course-1", "--students", "2", "--steps", "5",
            "--seed", "9", "--data-dir", data_dir]
    stdout_run = runner.invoke(main, args)
    assert stdout_run.exit_code == 0, stdout_run.output

    emit_path = tmp_path / "batch.jsonl"
    emit_run = runner.invoke(main, args + ["--emit", str(emit_path)])
    assert emit_run.exit_code == 0
    assert emit_path.read_text() == stdout_run.output
    for line in emit_path.read_text().splitlines():
        json.loads(line)


def test_simulate_post_sends_batch(runner, tmp_path, monkeypatch):
    doc = write_document(tmp_path)
    data_dir = str(tmp_path / "data")
    runner.invoke(main, ["import", str(doc), "--data-dir", data_dir])

    calls = {}

    class FakeResponse:
        status_code = 200
        text = '{"accepted": 1}'

    def fake_post(url, json=None, timeout=None):
        calls["url"] = url
        calls["batch"] = json
        return FakeResponse()

    monkeypatch.setattr("httpx.post", fake_post)
    result = runner.invoke(
        main,
        ["simulate", "--course", "course-1", "--students", "1", "--steps", "2",
         "--seed", "1", "--post", "http://localhost:9/courses/course-1/events",
         "--data-dir", data_dir],
    )
    assert result.exit_code == 0, result.output
    assert calls["url"].endswith("/events")
    assert isinstance(calls["batch"], list) and calls["batch"]


def test_report_is_reproducible(runner, tmp_path):
    doc = write_document(tmp_path)
    data_dir = str(tmp_path / "data")
    runner.invoke(main, ["import", str(doc), "--data-dir", data_dir])
    args = ["report", "--course", "course-1", "--student", "s1",
            "--at", "2026-03-02T10:00:00Z", "--data-dir", data_dir]
    first = runner.invoke(main, args)
    second = runner.invoke(main, args)
    assert first.exit_code == 0, first.output
    assert first.output == second.output
    payload = json.loads(first.output)
    assert payload["learning_path"]["entries"]


def test_data_dir_env_var(runner, tmp_path):
    doc = write_document(tmp_path)
    data_dir = str(tmp_path / "data")
    runner.invoke(main, ["import", str(doc)], env={"DATA_DIR": data_dir})
    result = runner.invoke(
        main,
        ["report", "--course", "course-1", "--student", "s1"],
        env={"DATA_DIR": data_dir},
    )
    assert result.exit_code == 0, result.output


def test_report_unknown_course_fails(runner, tmp_path):
    result = runner.invoke(
        main,
        ["report", "--course", "ghost", "--student", "s1",
         "--data-dir", str(tmp_path / "data")],
    )
    assert result.exit_code != 0
    assert "UNKNOWN_COURSE" in result.output


def test_serve_reports_port_in_use(runner, tmp_path):
    blocker = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    blocker.bind(("127.0.0.1", 0))
    blocker.listen(1)
    port = blocker.getsockname()[1]
    try:
        result = runner.invoke(
            main, ["serve", "--port", str(port), "--data-dir", str(tmp_path / "data")]
        )
        assert result.exit_code != 0
        assert "PORT_IN_USE" in result.output
    finally:
        blocker.close()
