/** Dendrogram panel: merge tree with a draggable horizontal cut line.
 *
 * Releasing the line maps its vertical position back to a merge height and
 * issues a by-height cut; the by-count input issues an exact-k cut instead.
 */

import { colorFor, dendrogramLayout, dragToHeight, groupCountAtHeight } from "./layout.js";
import type { AssignmentResponse, DendrogramResponse } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const W = 960;
const H = 420;
const MARGIN = 28;
const GROUND = H - 48;

export interface DendrogramCallbacks {
  onCutHeight(height: number): void;
  onSelectEntity(entityId: number): void;
}

export class DendrogramPanel {
  private cutY: number = MARGIN;
  private dragging = false;

  constructor(
    private root: HTMLElement,
    private callbacks: DendrogramCallbacks,
  ) {}

  render(tree: DendrogramResponse, assignment: AssignmentResponse | null): void {
    const layout = dendrogramLayout(tree.n, tree.merges);
    const labelOf = new Map<number, string>();
    const labels: string[] = [];
    if (assignment) {
      assignment.entities.forEach((e) => labelOf.set(e.id, e.label));
      labels.push(...assignment.labels);
    }

    const svg = document.createElementNS(SVG_NS, "svg");
    svg.setAttribute("viewBox", `0 0 ${W} ${H}`);
    svg.setAttribute("class", "dendrogram");

    const xPix = (x: number) => MARGIN + x * (W - 2 * MARGIN);
    const yPix = (y: number) => GROUND - y * (GROUND - MARGIN);

    for (const j of layout.junctions) {
      const path = document.createElementNS(SVG_NS, "path");
      const xl = xPix(layout.nodeX.get(j.left)!);
      const xr = xPix(layout.nodeX.get(j.right)!);
      const yl = yPix(layout.nodeY.get(j.left)!);
      const yr = yPix(layout.nodeY.get(j.right)!);
      const ym = yPix(j.y);
      path.setAttribute("d", `M ${xl} ${yl} L ${xl} ${ym} L ${xr} ${ym} L ${xr} ${yr}`);
      path.setAttribute("class", "junction");
      svg.appendChild(path);
    }

    for (const [leaf, x] of layout.leafX) {
      const id = tree.entity_ids[leaf];
      const dot = document.createElementNS(SVG_NS, "circle");
      dot.setAttribute("cx", String(xPix(x)));
      dot.setAttribute("cy", String(GROUND + 6));
      dot.setAttribute("r", "3");
      dot.setAttribute("class", "leaf");
      dot.dataset.entityId = String(id);
      const label = labelOf.get(id);
      dot.setAttribute("fill", label ? colorFor(label, labels) : "#999");
      dot.addEventListener("click", () => this.callbacks.onSelectEntity(id));
      svg.appendChild(dot);
    }

    const cutLine = document.createElementNS(SVG_NS, "line");
    cutLine.setAttribute("x1", String(MARGIN / 2));
    cutLine.setAttribute("x2", String(W - MARGIN / 2));
    cutLine.setAttribute("y1", String(this.cutY));
    cutLine.setAttribute("y2", String(this.cutY));
    cutLine.setAttribute("class", "cut-line");
    svg.appendChild(cutLine);

    const counter = document.createElementNS(SVG_NS, "text");
    counter.setAttribute("x", String(W - MARGIN));
    counter.setAttribute("y", String(MARGIN - 8));
    counter.setAttribute("text-anchor", "end");
    counter.setAttribute("class", "cut-count");
    svg.appendChild(counter);

    const heightAt = (clientY: number): number => {
      const rect = svg.getBoundingClientRect();
      const y = ((clientY - rect.top) / rect.height) * H;
      const normalized = (GROUND - y) / (GROUND - MARGIN);
      return dragToHeight(normalized, layout.maxHeight);
    };

    const moveTo = (clientY: number) => {
      const rect = svg.getBoundingClientRect();
      const y = Math.min(Math.max(((clientY - rect.top) / rect.height) * H, MARGIN), GROUND);
      this.cutY = y;
      cutLine.setAttribute("y1", String(y));
      cutLine.setAttribute("y2", String(y));
      const count = groupCountAtHeight(tree.n, tree.merges, heightAt(clientY));
      counter.textContent = `${count} groups`;
    };

    cutLine.addEventListener("pointerdown", (ev) => {
      this.dragging = true;
      cutLine.setPointerCapture(ev.pointerId);
    });
    cutLine.addEventListener("pointermove", (ev) => {
      if (this.dragging) moveTo(ev.clientY);
    });
    cutLine.addEventListener("pointerup", (ev) => {
      if (!this.dragging) return;
      this.dragging = false;
      cutLine.releasePointerCapture(ev.pointerId);
      this.callbacks.onCutHeight(heightAt(ev.clientY));
    });

    this.root.replaceChildren(svg);
  }
}
