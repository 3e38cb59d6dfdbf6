/** State for the instructor graph editor.
 *
 * Optimistic updates are forbidden: the rendered graph is always the last
 * document fetched from the server.  A rejected mutation only sets the
 * inline error (surfacing the server's code verbatim) and re-fetches, so
 * the view reconciles to server state after any sequence of attempts.
 */

import { ApiClient, RequestFailed } from "./api.js";
import type { EditorSelection } from "./graphView.js";
import type { GraphDocument, RelationType } from "./types.js";

export class EditorStore {
  graph: GraphDocument = { nodes: [], edges: [] };
  selection: EditorSelection = { tail: null, head: null, type: "ASSUMES" };
  inlineError: string | null = null;
  onChange: () => void = () => {};

  constructor(
    private readonly api: ApiClient,
    private readonly courseId: string,
  ) {}

  async refresh(): Promise<void> {
    this.graph = await this.api.getGraph(this.courseId);
    this.onChange();
  }

  pickNode(nodeId: string): void {
    const s = this.selection;
    if (s.tail === nodeId) {
      s.tail = null;
    } else if (s.head === nodeId) {
      s.head = null;
    } else if (s.tail === null) {
      s.tail = nodeId;
    } else {
      s.head = nodeId;
    }
    this.onChange();
  }

  pickType(type: RelationType): void {
    this.selection.type = type;
    this.onChange();
  }

  get canSubmit(): boolean {
    const { tail, head } = this.selection;
    return tail !== null && head !== null && tail !== head;
  }

  /** POST the pending relation; 201 re-renders the new edge, 409 shows the
   * server's error code inline and leaves the graph untouched. */
  async submitRelation(): Promise<boolean> {
    const { tail, head, type } = this.selection;
    if (tail === null || head === null) {
      return false;
    }
    this.inlineError = null;
    try {
      await this.api.addRelation(this.courseId, tail, head, type);
      this.selection = { tail: null, head: null, type };
    } catch (error) {
      if (error instanceof RequestFailed) {
        this.inlineError = error.code;
      } else {
        this.inlineError = "NETWORK_ERROR";
      }
    }
    await this.refresh();
    return this.inlineError === null;
  }

  async deleteRelation(relationId: string): Promise<void> {
    this.inlineError = null;
    try {
      await this.api.removeRelation(this.courseId, relationId);
    } catch (error) {
      if (error instanceof RequestFailed) {
        this.inlineError = error.code;
      } else {
        this.inlineError = "NETWORK_ERROR";
      }
    }
    await this.refresh();
  }

  /** Reconciliation check: current state must equal a fresh fetch. */
  async reconciled(): Promise<boolean> {
    const fresh = await this.api.getGraph(this.courseId);
    return JSON.stringify(fresh) === JSON.stringify(this.graph);
  }
}
