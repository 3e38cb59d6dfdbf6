import { describe, expect, it } from "vitest";

import { layoutGraph, prerequisiteDepths } from "../src/graphLayout.js";
import { EDGE_STYLES, renderGraph } from "../src/graphView.js";
import type { GraphDocument } from "../src/types.js";

const DOC: GraphDocument = {
  nodes: [
    { id: "A", title: "Iteration", taxonomy: "APPLY", threshold: 0.8 },
    { id: "B", title: "Recursion", taxonomy: "APPLY", threshold: 0.8 },
    { id: "C", title: "Trees", taxonomy: "ANALYZE", threshold: 0.7 },
  ],
  edges: [
    { id: "assumes:B:A", tail: "B", head: "A", type: "ASSUMES" },
    { id: "relates:A:C", tail: "A", head: "C", type: "RELATES" },
  ],
};

describe("edge styles", () => {
  it("are pairwise distinguishable without color", () => {
    const signatures = Object.values(EDGE_STYLES).map(
      (s) => `${s.dasharray}|${s.arrow}|${s.double}`,
    );
    expect(new Set(signatures).size).toBe(4);
  });
});

describe("layout", () => {
  it("places prerequisites in earlier columns", () => {
    const depths = prerequisiteDepths(DOC);
    expect(depths.get("A")).toBe(0);
    expect(depths.get("B")).toBe(1);
    expect(depths.get("C")).toBe(0); // relates does not order
    const positions = layoutGraph(DOC);
    expect(positions.get("A")!.x).toBeLessThan(positions.get("B")!.x);
  });

  it("is deterministic", () => {
    const a = JSON.stringify([...layoutGraph(DOC).entries()]);
    const b = JSON.stringify([...layoutGraph(DOC).entries()]);
    expect(a).toBe(b);
  });
});

describe("renderGraph", () => {
  it("draws every node and edge with type metadata", () => {
    const svg = renderGraph(DOC, { tail: null, head: null, type: "ASSUMES" });
    for (const node of DOC.nodes) {
      expect(svg).toContain(`data-node-id="${node.id}"`);
    }
    expect(svg).toContain('data-edge-type="ASSUMES"');
    expect(svg).toContain('data-edge-type="RELATES"');
    expect(svg).toContain("marker-end"); // assumes carries an arrowhead
  });

  it("marks the pending selection", () => {
    const svg = renderGraph(DOC, { tail: "B", head: "A", type: "ASSUMES" });
    expect(svg).toContain('data-selected="tail"');
    expect(svg).toContain('data-selected="head"');
  });

  it("escapes titles", () => {
    const doc: GraphDocument = {
      nodes: [{ id: "A", title: "<script>", taxonomy: "APPLY", threshold: 0.8 }],
      edges: [],
    };
    const svg = renderGraph(doc, { tail: null, head: null, type: "ASSUMES" });
    expect(svg).toContain("&lt;script&gt;");
  });
});
