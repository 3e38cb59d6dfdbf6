/** SVG rendering of the competency relation graph.
 *
 * Each relation type has its own stroke style so types stay distinguishable
 * without relying on color alone: ASSUMES solid + arrow, EXTENDS dashed +
 * arrow, RELATES dotted, MATCHES double line.
 */

import { NODE_HEIGHT, NODE_WIDTH, canvasSize, layoutGraph } from "./graphLayout.js";
import { TAXONOMY_ICONS } from "./rings.js";
import type { GraphDocument, GraphEdge, RelationType } from "./types.js";

export interface EdgeStyle {
  dasharray: string;
  arrow: boolean;
  double: boolean;
}

export const EDGE_STYLES: Record<RelationType, EdgeStyle> = {
  ASSUMES: { dasharray: "", arrow: true, double: false },
  EXTENDS: { dasharray: "9 5", arrow: true, double: false },
  RELATES: { dasharray: "2 5", arrow: false, double: false },
  MATCHES: { dasharray: "", arrow: false, double: true },
};

export interface EditorSelection {
  tail: string | null;
  head: string | null;
  type: RelationType;
}

function edgeLines(edge: GraphEdge, doc: GraphDocument): string {
  const positions = layoutGraph(doc);
  const from = positions.get(edge.tail);
  const to = positions.get(edge.head);
  if (!from || !to) {
    return "";
  }
  const x1 = from.x + NODE_WIDTH / 2;
  const y1 = from.y + NODE_HEIGHT / 2;
  const x2 = to.x + NODE_WIDTH / 2;
  const y2 = to.y + NODE_HEIGHT / 2;
  const style = EDGE_STYLES[edge.type];
  const dash = style.dasharray ? ` stroke-dasharray="${style.dasharray}"` : "";
  const marker = style.arrow ? ` marker-end="url(#arrow)"` : "";
  const base =
    `<line x1="${x1}" y1="${y1}" x2="${x2}" y2="${y2}" stroke="#555" ` +
    `stroke-width="1.6"${dash}${marker} data-edge-id="${edge.id}" ` +
    `data-edge-type="${edge.type}"></line>`;
  if (!style.double) {
    return base;
  }
  // double stroke: offset twin line perpendicular to the segment
  const length = Math.hypot(x2 - x1, y2 - y1) || 1;
  const ox = (-(y2 - y1) / length) * 3;
  const oy = ((x2 - x1) / length) * 3;
  const twin =
    `<line x1="${x1 + ox}" y1="${y1 + oy}" x2="${x2 + ox}" y2="${y2 + oy}" ` +
    `stroke="#555" stroke-width="1.6" data-edge-twin="${edge.id}"></line>`;
  return base + twin;
}

function nodeBox(doc: GraphDocument, id: string, selection: EditorSelection): string {
  const positions = layoutGraph(doc);
  const node = doc.nodes.find((n) => n.id === id);
  const pos = positions.get(id);
  if (!node || !pos) {
    return "";
  }
  const role =
    selection.tail === id ? "tail" : selection.head === id ? "head" : "none";
  const stroke = role === "none" ? "#888" : "#1a4fb3";
  const width = role === "none" ? 1.4 : 3;
  return (
    `<g data-node-id="${node.id}" class="graph-node" data-selected="${role}">` +
    `<rect x="${pos.x}" y="${pos.y}" width="${NODE_WIDTH}" height="${NODE_HEIGHT}" ` +
    `rx="8" fill="#fdfdfd" stroke="${stroke}" stroke-width="${width}"></rect>` +
    `<text x="${pos.x + 10}" y="${pos.y + 24}" font-size="13">` +
    `${TAXONOMY_ICONS[node.taxonomy]} ${escapeXml(node.title)}</text>` +
    `<text x="${pos.x + 10}" y="${pos.y + 46}" font-size="11" fill="#666">` +
    `${node.id} · T=${Math.round(node.threshold * 100)}%</text>` +
    `</g>`
  );
}

export function renderGraph(doc: GraphDocument, selection: EditorSelection): string {
  const size = canvasSize(layoutGraph(doc));
  const edges = doc.edges.map((edge) => edgeLines(edge, doc)).join("");
  const nodes = doc.nodes.map((node) => nodeBox(doc, node.id, selection)).join("");
  return (
    `<svg viewBox="0 0 ${size.width} ${size.height}" width="${size.width}" ` +
    `height="${size.height}" class="graph-canvas">` +
    `<defs><marker id="arrow" viewBox="0 0 10 10" refX="10" refY="5" ` +
    `markerWidth="8" markerHeight="8" orient="auto-start-reverse">` +
    `<path d="M 0 0 L 10 5 L 0 10 z" fill="#555"></path></marker></defs>` +
    edges +
    nodes +
    `</svg>`
  );
}

function escapeXml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}
