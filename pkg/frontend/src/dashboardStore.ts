/** State for the student dashboard: rings, checkboxes, learning path.
 *
 * The checkbox toggle appends a MANUAL_TOGGLE event (the client supplies the
 * timestamp; the server never invents times) and then refetches progress and
 * path, so the next recommendation reflects the action.
 */

import { ApiClient } from "./api.js";
import type { LearningPath, ProgressReport, ResourceStatus } from "./types.js";

export class DashboardStore {
  progress: ProgressReport | null = null;
  path: LearningPath | null = null;
  stale = false;
  banner: string | null = null;
  onChange: () => void = () => {};

  constructor(
    private readonly api: ApiClient,
    private readonly courseId: string,
    private readonly studentId: string,
    private readonly now: () => Date = () => new Date(),
    private readonly newId: () => string = () => crypto.randomUUID(),
  ) {}

  async refresh(): Promise<void> {
    try {
      this.progress = await this.api.getProgress(this.courseId, this.studentId);
      this.path = await this.api.getLearningPath(this.courseId, this.studentId);
      this.stale = false;
      this.banner = null;
    } catch {
      // keep the stale view visible but flagged; the user can retry
      this.stale = true;
      this.banner = "connection lost - showing last known state";
    }
    this.onChange();
  }

  /** First not-yet-finished resource on the path, if any. */
  get recommendation(): string | null {
    for (const entry of this.path?.entries ?? []) {
      const first = entry.recommended_resources[0];
      if (first !== undefined) {
        return first;
      }
    }
    return null;
  }

  units(): ResourceStatus[] {
    return (this.progress?.resources ?? []).filter((r) => r.kind !== "EXERCISE");
  }

  async toggleUnit(resourceId: string): Promise<void> {
    const result = await this.api.appendEvents(this.courseId, [
      {
        event_id: this.newId(),
        student_id: this.studentId,
        resource_id: resourceId,
        kind: "MANUAL_TOGGLE",
        timestamp: this.now().toISOString(),
      },
    ]);
    if (result.rejected.length > 0) {
      this.banner = result.rejected[0]?.code ?? "REJECTED";
      this.onChange();
      return;
    }
    await this.refresh();
  }
}
