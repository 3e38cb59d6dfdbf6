/** Spawn the real engine service for end-to-end tests. */

import { type ChildProcess, spawn } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

export interface RunningService {
  baseUrl: string;
  stop: () => void;
}

export async function startService(): Promise<RunningService> {
  const port = 20000 + Math.floor(Math.random() * 20000);
  const dataDir = mkdtempSync(join(tmpdir(), "engine-e2e-"));
  const child: ChildProcess = spawn(
    "python3",
    ["-m", "competency_engine.cli", "serve", "--port", String(port), "--data-dir", dataDir],
    { stdio: "ignore" },
  );
  const baseUrl = `http://127.0.0.1:${port}`;
  const deadline = Date.now() + 20_000;
  for (;;) {
    try {
      const response = await fetch(`${baseUrl}/courses/__ping__`);
      if (response.status === 404) {
        break; // service is up; unknown course is the expected answer
      }
    } catch {
      // not listening yet
    }
    if (Date.now() > deadline) {
      child.kill();
      throw new Error("service did not come up in time");
    }
    await new Promise((resolve) => setTimeout(resolve, 150));
  }
  return {
    baseUrl,
    stop: () => {
      child.kill();
      rmSync(dataDir, { recursive: true, force: true });
    },
  };
}

/** Course used by the e2e suites: B assumes A; A carries the worked-example
 * metrics fixture (two units + one exercise), B one unit. */
export const FIXTURE_COURSE = {
  course_id: "ui-fixture",
  title: "UI fixture",
  competencies: [
    { id: "A", title: "Iteration", taxonomy: "APPLY", threshold: 0.8 },
    { id: "B", title: "Recursion", taxonomy: "ANALYZE", threshold: 0.8 },
  ],
  relations: [{ tail: "B", head: "A", type: "ASSUMES" }],
  resources: [
    { id: "u1", kind: "TEXT_UNIT", title: "Reading", order_index: 0 },
    { id: "u2", kind: "FILE_UNIT", title: "Slides", order_index: 1 },
    { id: "x", kind: "EXERCISE", title: "Quiz", order_index: 2, max_points: 10 },
    { id: "u3", kind: "TEXT_UNIT", title: "Advanced reading", order_index: 0 },
  ],
  links: [
    { competency_id: "A", resource_id: "u1", kind: "PREREQUISITE" },
    { competency_id: "A", resource_id: "u2", kind: "PREREQUISITE" },
    { competency_id: "A", resource_id: "x", kind: "LEARNING_GOAL" },
    { competency_id: "B", resource_id: "u3", kind: "PREREQUISITE" },
  ],
};

export function fixtureEvents(studentId: string, score: number) {
  return [
    {
      event_id: `seed-${studentId}-open`,
      student_id: studentId,
      resource_id: "u1",
      kind: "TEXT_OPEN",
      timestamp: "2026-03-02T09:00:00.000Z",
    },
    {
      event_id: `seed-${studentId}-submit`,
      student_id: studentId,
      resource_id: "x",
      kind: "EXERCISE_SUBMISSION",
      timestamp: "2026-03-02T09:10:00.000Z",
      score,
    },
  ];
}
