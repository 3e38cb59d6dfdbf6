/** Three-ring mastery visualization.
 *
 * Blue (inner) = overall progress, green (middle) = confidence relative to
 * the threshold, red (outer) = advancement toward mastery.  The fractions
 * arrive pre-computed and pre-clamped from the progress endpoint; rendering
 * only turns them into stroke arcs.
 */

import type { CompetencyProgress, Taxonomy } from "./types.js";

// shape-based icons: identifiable without color
export const TAXONOMY_ICONS: Record<Taxonomy, string> = {
  REMEMBER: "\u{1F4D6}", // open book: recall
  UNDERSTAND: "\u{1F4A1}", // light bulb: comprehension
  APPLY: "\u{1F527}", // wrench: use in practice
  ANALYZE: "\u{1F50D}", // magnifier: take apart
  EVALUATE: "\u{2696}\u{FE0F}", // scales: judge
  CREATE: "\u{2728}", // sparkles: produce something new
};

export interface RingGeometry {
  radius: number;
  circumference: number;
  dash: string;
}

/** Arc geometry for one ring: a stroke covering `fraction` of the circle. */
export function ringArc(fraction: number, radius: number): RingGeometry {
  const clamped = Math.min(Math.max(fraction, 0), 1);
  const circumference = 2 * Math.PI * radius;
  const filled = clamped * circumference;
  return {
    radius,
    circumference,
    dash: `${filled.toFixed(3)} ${(circumference - filled).toFixed(3)}`,
  };
}

const RING_RADII = { blue: 22, green: 34, red: 46 } as const;
const RING_COLORS = { blue: "#2f6fde", green: "#2e9e44", red: "#d63a3a" } as const;

function circle(radius: number, color: string, dash: string, track: boolean): string {
  const common = `cx="60" cy="60" r="${radius}" fill="none" stroke-width="9"`;
  if (track) {
    return `<circle ${common} stroke="#e8e8e8"></circle>`;
  }
  // rotate so arcs start at 12 o'clock
  return (
    `<circle ${common} stroke="${color}" stroke-linecap="round" ` +
    `stroke-dasharray="${dash}" transform="rotate(-90 60 60)"></circle>`
  );
}

/** Render one competency's rings as an SVG string. */
export function renderRings(progress: CompetencyProgress, taxonomy: Taxonomy): string {
  const parts: string[] = [];
  for (const name of ["red", "green", "blue"] as const) {
    const arc = ringArc(progress.rings[name], RING_RADII[name]);
    parts.push(circle(arc.radius, "", "", true));
    parts.push(circle(arc.radius, RING_COLORS[name], arc.dash, false));
  }
  const icon = TAXONOMY_ICONS[taxonomy];
  const badge = progress.mastered
    ? `<text x="60" y="116" text-anchor="middle" class="mastered-badge">mastered</text>`
    : "";
  return (
    `<svg viewBox="0 0 120 120" width="120" height="132" role="img" ` +
    `aria-label="mastery rings for ${progress.competency_id}" ` +
    `data-ring-blue="${progress.rings.blue}" data-ring-green="${progress.rings.green}" ` +
    `data-ring-red="${progress.rings.red}" data-mastered="${progress.mastered}">` +
    parts.join("") +
    `<text x="60" y="66" text-anchor="middle" font-size="20">${icon}</text>` +
    badge +
    `</svg>`
  );
}
