/** Always-visible legend explaining the rings and the taxonomy icons. */

import { TAXONOMY_ICONS } from "./rings.js";
import type { Taxonomy } from "./types.js";

const RING_MEANINGS: Array<[string, string]> = [
  ["blue (inner)", "progress: share of linked units completed and exercises attempted"],
  ["green (middle)", "confidence: average exercise score relative to the mastery threshold"],
  ["red (outer)", "mastery: weighted blend of progress and confidence; full once mastered"],
];

export function renderLegend(): string {
  const rings = RING_MEANINGS.map(
    ([name, meaning]) =>
      `<li><span class="legend-ring legend-${name.split(" ")[0]}"></span>` +
      `<strong>${name}</strong> — ${meaning}</li>`,
  ).join("");
  const icons = (Object.keys(TAXONOMY_ICONS) as Taxonomy[])
    .map((level) => `<li><span>${TAXONOMY_ICONS[level]}</span> ${level.toLowerCase()}</li>`)
    .join("");
  return (
    `<details class="legend" open>` +
    `<summary>Legend</summary>` +
    `<ul class="legend-rings">${rings}</ul>` +
    `<ul class="legend-icons">${icons}</ul>` +
    `</details>`
  );
}
