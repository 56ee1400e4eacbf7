/** Pure geometry for the dendrogram and scatter views; no DOM access here. */

import type { AssignmentEntity, IndicatorValue, MergeRecord } from "./types.js";

export interface DendrogramLayout {
  leafX: Map<number, number>; // leaf node id -> x in [0, 1]
  junctions: { left: number; right: number; node: number; x: number; y: number }[];
  nodeX: Map<number, number>;
  nodeY: Map<number, number>; // normalized height in [0, 1], 0 = ground
  maxHeight: number;
  leafOrder: number[];
}

/** Depth-first leaf order, visiting the smaller-id child of each merge first. */
export function leafOrder(n: number, merges: MergeRecord[]): number[] {
  if (merges.length === 0) return [0];
  const children = new Map<number, [number, number]>();
  merges.forEach((m, k) => children.set(n + k, [m.left, m.right]));
  const order: number[] = [];
  const stack = [n + merges.length - 1];
  while (stack.length > 0) {
    const node = stack.pop()!;
    if (node < n) {
      order.push(node);
    } else {
      const [left, right] = children.get(node)!;
      const [first, second] = left < right ? [left, right] : [right, left];
      stack.push(second, first);
    }
  }
  return order;
}

export function dendrogramLayout(n: number, merges: MergeRecord[]): DendrogramLayout {
  const order = leafOrder(n, merges);
  const maxHeight = merges.reduce((acc, m) => Math.max(acc, m.height), 0) || 1;
  const leafX = new Map<number, number>();
  order.forEach((leaf, pos) => leafX.set(leaf, n === 1 ? 0.5 : pos / (n - 1)));
  const nodeX = new Map(leafX);
  const nodeY = new Map<number, number>();
  for (let leaf = 0; leaf < n; leaf += 1) nodeY.set(leaf, 0);
  const junctions: DendrogramLayout["junctions"] = [];
  merges.forEach((m, k) => {
    const node = n + k;
    const x = (nodeX.get(m.left)! + nodeX.get(m.right)!) / 2;
    const y = m.height / maxHeight;
    nodeX.set(node, x);
    nodeY.set(node, y);
    junctions.push({ left: m.left, right: m.right, node, x, y });
  });
  return { leafX, junctions, nodeX, nodeY, maxHeight, leafOrder: order };
}

/** Cut height implied by a vertical drag position (normalized 0..1 from ground). */
export function dragToHeight(normalized: number, maxHeight: number): number {
  const clamped = Math.min(Math.max(normalized, 0), 1);
  return clamped * maxHeight;
}

/** Group count a height cut would produce: merges strictly above survive. */
export function groupCountAtHeight(n: number, merges: MergeRecord[], height: number): number {
  const applied = merges.filter((m) => m.height <= height).length;
  return n - applied;
}

export function distinctGroups(entities: AssignmentEntity[]): number[] {
  return [...new Set(entities.map((e) => e.group))].sort((a, b) => a - b);
}

export function distinctLabels(entities: AssignmentEntity[]): string[] {
  return [...new Set(entities.map((e) => e.label))].sort(labelCompare);
}

const ROMAN: Record<string, number> = { I: 1, II: 2, III: 3, IV: 4, V: 5 };

/** Ia < Ib < IIa < ... < IIIc; non-roman labels follow in natural order. */
export function labelCompare(a: string, b: string): number {
  const parse = (label: string): [number, number | string, string] => {
    const roman = /^([IVX]+)([a-z]*)$/.exec(label);
    if (roman && ROMAN[roman[1]] !== undefined) return [0, ROMAN[roman[1]], roman[2]];
    const natural = /^(\D*)(\d+)$/.exec(label);
    if (natural) return [1, natural[1], natural[2].padStart(8, "0")];
    return [2, label, ""];
  };
  const [ka, ma, sa] = parse(a);
  const [kb, mb, sb] = parse(b);
  if (ka !== kb) return ka - kb;
  if (ma !== mb) return ma < mb ? -1 : 1;
  return sa < sb ? -1 : sa > sb ? 1 : 0;
}

export interface ScatterPoint {
  id: number;
  x: number; // normalized 0..1 by entity id span
  y: number; // normalized 0..1 by the 0..100 indicator scale
  label: string;
  value: number;
}

export function scatterPoints(values: IndicatorValue[]): ScatterPoint[] {
  if (values.length === 0) return [];
  const ids = values.map((v) => v.id);
  const lo = Math.min(...ids);
  const span = Math.max(...ids) - lo || 1;
  return values.map((v) => ({
    id: v.id,
    x: (v.id - lo) / span,
    y: v.nl2 / 100,
    label: v.label,
    value: v.nl2,
  }));
}

const PALETTE = [
  "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

export function colorFor(label: string, labels: string[]): string {
  const ordered = [...new Set(labels)].sort(labelCompare);
  return PALETTE[ordered.indexOf(label) % PALETTE.length];
}
