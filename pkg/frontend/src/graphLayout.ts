/** Deterministic layered layout for the relation graph.
 *
 * Prerequisite depth (longest ASSUMES/EXTENDS chain, head side first)
 * becomes the column; rows are sorted by id.  Same document, same layout.
 */

import type { GraphDocument } from "./types.js";

export interface NodePosition {
  id: string;
  x: number;
  y: number;
}

export const NODE_WIDTH = 150;
export const NODE_HEIGHT = 64;
const COLUMN_GAP = 220;
const ROW_GAP = 96;
const MARGIN = 24;

export function prerequisiteDepths(doc: GraphDocument): Map<string, number> {
  const depth = new Map<string, number>();
  for (const node of doc.nodes) {
    depth.set(node.id, 0);
  }
  const ordering = doc.edges.filter(
    (e) => e.type === "ASSUMES" || e.type === "EXTENDS",
  );
  // relax longest-path; the server guarantees acyclicity, the bound is defensive
  for (let pass = 0; pass <= doc.nodes.length; pass += 1) {
    let changed = false;
    for (const edge of ordering) {
      const needed = (depth.get(edge.head) ?? 0) + 1;
      if (needed > (depth.get(edge.tail) ?? 0)) {
        depth.set(edge.tail, needed);
        changed = true;
      }
    }
    if (!changed) {
      break;
    }
  }
  return depth;
}

export function layoutGraph(doc: GraphDocument): Map<string, NodePosition> {
  const depth = prerequisiteDepths(doc);
  const columns = new Map<number, string[]>();
  for (const node of [...doc.nodes].sort((a, b) => a.id.localeCompare(b.id))) {
    const column = depth.get(node.id) ?? 0;
    const rows = columns.get(column) ?? [];
    rows.push(node.id);
    columns.set(column, rows);
  }
  const positions = new Map<string, NodePosition>();
  for (const [column, ids] of columns) {
    ids.forEach((id, row) => {
      positions.set(id, {
        id,
        x: MARGIN + column * COLUMN_GAP,
        y: MARGIN + row * ROW_GAP,
      });
    });
  }
  return positions;
}

export function canvasSize(positions: Map<string, NodePosition>): { width: number; height: number } {
  let width = 360;
  let height = 240;
  for (const p of positions.values()) {
    width = Math.max(width, p.x + NODE_WIDTH + MARGIN);
    height = Math.max(height, p.y + NODE_HEIGHT + MARGIN);
  }
  return { width, height };
}
