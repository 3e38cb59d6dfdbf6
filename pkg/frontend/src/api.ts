/** Thin fetch client for the engine's HTTP API.
 *
 * The UI is a pure client: every number it renders comes verbatim from one
 * of these responses, never from client-side recomputation.
 */

import type {
  ApiError,
  AppendResult,
  EventRecord,
  GraphDocument,
  LearningPath,
  ProgressReport,
  RelationType,
} from "./types.js";

export class RequestFailed extends Error {
  readonly code: string;
  readonly status: number;

  constructor(status: number, body: ApiError) {
    super(body.message);
    this.code = body.code;
    this.status = status;
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (response.status === 204) {
      return undefined as T;
    }
    const payload = await response.json();
    if (!response.ok) {
      throw new RequestFailed(response.status, payload as ApiError);
    }
    return payload as T;
  }

  getGraph(courseId: string): Promise<GraphDocument> {
    return this.request("GET", `/courses/${courseId}/graph`);
  }

  addRelation(
    courseId: string,
    tail: string,
    head: string,
    type: RelationType,
  ): Promise<{ id: string }> {
    return this.request("POST", `/courses/${courseId}/relations`, { tail, head, type });
  }

  removeRelation(courseId: string, relationId: string): Promise<void> {
    return this.request("DELETE", `/courses/${courseId}/relations/${relationId}`);
  }

  getProgress(courseId: string, studentId: string): Promise<ProgressReport> {
    return this.request("GET", `/courses/${courseId}/students/${studentId}/progress`);
  }

  getLearningPath(courseId: string, studentId: string): Promise<LearningPath> {
    return this.request("GET", `/courses/${courseId}/students/${studentId}/learning-path`);
  }

  appendEvents(courseId: string, events: EventRecord[]): Promise<AppendResult> {
    return this.request("POST", `/courses/${courseId}/events`, events);
  }

  importCourse(document: unknown): Promise<{ course_id: string }> {
    return this.request("POST", "/courses", document);
  }
}
