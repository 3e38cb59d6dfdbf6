/** SPA entry point: hash routes for the instructor editor and the student
 * dashboard.  All logic lives in the stores; this file is DOM glue. */

import { ApiClient } from "./api.js";
import { DashboardStore } from "./dashboardStore.js";
import { EditorStore } from "./editorStore.js";
import { renderGraph } from "./graphView.js";
import { renderLegend } from "./legend.js";
import { renderRings } from "./rings.js";
import type { RelationType, Taxonomy } from "./types.js";

const API_BASE = (window as { COMPETENCY_API_BASE?: string }).COMPETENCY_API_BASE
  ?? "http://127.0.0.1:8000";

const RELATION_TYPES: RelationType[] = ["ASSUMES", "EXTENDS", "RELATES", "MATCHES"];

function root(): HTMLElement {
  return document.getElementById("app") as HTMLElement;
}

// --- instructor editor -------------------------------------------------------

function renderEditor(store: EditorStore): void {
  const typeButtons = RELATION_TYPES.map(
    (t) =>
      `<label><input type="radio" name="rel-type" value="${t}" ` +
      `${store.selection.type === t ? "checked" : ""}> ${t.toLowerCase()}</label>`,
  ).join(" ");
  const edgeRows = store.graph.edges
    .map(
      (e) =>
        `<li>${e.tail} <em>${e.type.toLowerCase()}</em> ${e.head} ` +
        `<button data-delete-edge="${e.id}">remove</button></li>`,
    )
    .join("");
  root().innerHTML = `
    <h1>Competency graph</h1>
    <p class="hint">Click a node to pick the tail, a second for the head, then add the relation.</p>
    <div class="toolbar">
      ${typeButtons}
      <button id="add-relation" ${store.canSubmit ? "" : "disabled"}>Add relation</button>
      <span id="inline-error" class="inline-error" data-code="${store.inlineError ?? ""}">
        ${store.inlineError ?? ""}
      </span>
    </div>
    <div id="graph">${renderGraph(store.graph, store.selection)}</div>
    <ul class="edge-list">${edgeRows}</ul>
    ${renderLegend()}
  `;
  root().querySelectorAll<SVGGElement>("[data-node-id]").forEach((el) => {
    el.addEventListener("click", () => store.pickNode(el.dataset.nodeId as string));
  });
  root().querySelectorAll<HTMLInputElement>("input[name=rel-type]").forEach((el) => {
    el.addEventListener("change", () => store.pickType(el.value as RelationType));
  });
  root().querySelector("#add-relation")?.addEventListener("click", () => {
    void store.submitRelation();
  });
  root().querySelectorAll<HTMLButtonElement>("[data-delete-edge]").forEach((el) => {
    el.addEventListener("click", () => {
      void store.deleteRelation(el.dataset.deleteEdge as string);
    });
  });
}

// --- student dashboard ------------------------------------------------------------

function renderDashboard(store: DashboardStore, taxonomies: Map<string, Taxonomy>): void {
  const banner = store.banner
    ? `<div class="banner" data-stale="${store.stale}">${store.banner}
         <button id="retry">retry</button></div>`
    : "";
  const cards = (store.progress?.competencies ?? [])
    .map(
      (c) =>
        `<figure class="competency-card" data-competency="${c.competency_id}">` +
        renderRings(c, taxonomies.get(c.competency_id) ?? "UNDERSTAND") +
        `<figcaption>${c.competency_id}</figcaption></figure>`,
    )
    .join("");
  const checkboxes = store
    .units()
    .map(
      (u) =>
        `<li><label><input type="checkbox" data-toggle="${u.resource_id}" ` +
        `${u.completed ? "checked" : ""}> ${u.title || u.resource_id}` +
        `${u.source === "MANUAL" ? " (manual)" : ""}</label></li>`,
    )
    .join("");
  const pathEntries = (store.path?.entries ?? [])
    .map(
      (e) =>
        `<li>${e.competency_ids.join(", ")} ` +
        `<span class="todo">next: ${e.recommended_resources.join(", ") || "-"}</span></li>`,
    )
    .join("");
  root().innerHTML = `
    <h1>My progress</h1>
    ${banner}
    <div class="cards">${cards || "<p>No competencies defined yet.</p>"}</div>
    <h2>Lecture units</h2>
    <ul class="units">${checkboxes}</ul>
    <h2>Learning path</h2>
    <p id="recommendation" data-resource="${store.recommendation ?? ""}">
      ${store.recommendation ? `Up next: ${store.recommendation}` : "All done!"}
    </p>
    <ol class="path">${pathEntries}</ol>
    ${renderLegend()}
  `;
  root().querySelectorAll<HTMLInputElement>("[data-toggle]").forEach((el) => {
    el.addEventListener("change", () => {
      void store.toggleUnit(el.dataset.toggle as string);
    });
  });
  root().querySelector("#retry")?.addEventListener("click", () => void store.refresh());
}

// --- router ----------------------------------------------------------------------------

async function route(): Promise<void> {
  const api = new ApiClient(API_BASE);
  const hash = window.location.hash;
  const editorMatch = /^#\/course\/([^/]+)\/editor$/.exec(hash);
  const studentMatch = /^#\/course\/([^/]+)\/student\/([^/]+)$/.exec(hash);
  if (editorMatch) {
    const store = new EditorStore(api, editorMatch[1] as string);
    store.onChange = () => renderEditor(store);
    await store.refresh();
    return;
  }
  if (studentMatch) {
    const courseId = studentMatch[1] as string;
    const store = new DashboardStore(api, courseId, studentMatch[2] as string);
    const graph = await api.getGraph(courseId);
    const taxonomies = new Map(graph.nodes.map((n) => [n.id, n.taxonomy]));
    store.onChange = () => renderDashboard(store, taxonomies);
    await store.refresh();
    return;
  }
  root().innerHTML = `
    <h1>Competency engine</h1>
    <p>Open <code>#/course/&lt;course-id&gt;/editor</code> for the instructor
    graph editor or <code>#/course/&lt;course-id&gt;/student/&lt;student-id&gt;</code>
    for the student dashboard.</p>
  `;
}

window.addEventListener("hashchange", () => void route());
window.addEventListener("DOMContentLoaded", () => void route());
