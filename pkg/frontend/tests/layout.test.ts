import { describe, expect, it } from "vitest";

import {
  colorFor,
  dendrogramLayout,
  distinctGroups,
  dragToHeight,
  groupCountAtHeight,
  labelCompare,
  leafOrder,
  scatterPoints,
} from "../src/layout.js";
import { tinyDataset } from "./fake_server.js";

describe("dendrogram layout", () => {
  it("produces one junction per merge and positions every leaf", () => {
    const { merges, ids } = tinyDataset();
    const layout = dendrogramLayout(ids.length, merges);
    expect(layout.junctions).toHaveLength(merges.length);
    expect(layout.leafX.size).toBe(ids.length);
    for (const x of layout.leafX.values()) {
      expect(x).toBeGreaterThanOrEqual(0);
      expect(x).toBeLessThanOrEqual(1);
    }
  });

  it("visits the smaller-id child first", () => {
    const order = leafOrder(3, [
      { left: 0, right: 1, height: 1, size: 2 },
      { left: 2, right: 3, height: 81, size: 3 },
    ]);
    expect(order).toEqual([2, 0, 1]);
  });

  it("normalizes junction heights by the tallest merge", () => {
    const { merges, ids } = tinyDataset();
    const layout = dendrogramLayout(ids.length, merges);
    const ys = layout.junctions.map((j) => j.y);
    expect(Math.max(...ys)).toBe(1);
    expect(layout.maxHeight).toBe(90);
  });
});

describe("cut math", () => {
  it("maps drag positions to heights, clamped to the tree", () => {
    expect(dragToHeight(0.5, 90)).toBe(45);
    expect(dragToHeight(-0.2, 90)).toBe(0);
    expect(dragToHeight(1.4, 90)).toBe(90);
  });

  it("counts groups at a height the way the server cuts", () => {
    const { merges, ids } = tinyDataset();
    expect(groupCountAtHeight(ids.length, merges, 0)).toBe(6);
    expect(groupCountAtHeight(ids.length, merges, 2)).toBe(4);
    expect(groupCountAtHeight(ids.length, merges, 10)).toBe(2);
    expect(groupCountAtHeight(ids.length, merges, 100)).toBe(1);
  });
});

describe("labels and colors", () => {
  it("orders roman subcategory labels by category then suffix", () => {
    const labels = ["IIIc", "Ia", "IIb", "Ib", "IIa", "IIIa", "IIIb"];
    expect([...labels].sort(labelCompare)).toEqual([
      "Ia", "Ib", "IIa", "IIb", "IIIa", "IIIb", "IIIc",
    ]);
  });

  it("sorts generated group labels naturally", () => {
    expect(["G10", "G2", "G1"].sort(labelCompare)).toEqual(["G1", "G2", "G10"]);
  });

  it("assigns stable colors per label set", () => {
    const labels = ["Ia", "Ib"];
    expect(colorFor("Ia", labels)).not.toBe(colorFor("Ib", labels));
    expect(colorFor("Ia", labels)).toBe(colorFor("Ia", [...labels].reverse()));
  });
});

describe("scatter points", () => {
  it("normalizes ids and values into the unit square", () => {
    const points = scatterPoints([
      { id: 10, nl2: 0, label: "Ia" },
      { id: 20, nl2: 50, label: "Ib" },
      { id: 30, nl2: 100, label: "Ia" },
    ]);
    expect(points.map((p) => p.x)).toEqual([0, 0.5, 1]);
    expect(points.map((p) => p.y)).toEqual([0, 0.5, 1]);
  });

  it("extracts distinct groups in ascending order", () => {
    const entities = [
      { id: 1, name: "", group: 2, label: "Ia" },
      { id: 2, name: "", group: 0, label: "Ib" },
      { id: 3, name: "", group: 2, label: "Ia" },
    ];
    expect(distinctGroups(entities)).toEqual([0, 2]);
  });
});
