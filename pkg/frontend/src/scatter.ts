/** Indicator scatter: entity id against NL2, colored by label, with
 * per-label range bands and black-square highlights for selected entities. */

import { colorFor, labelCompare, scatterPoints } from "./layout.js";
import type { IndicatorResponse } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const W = 960;
const H = 360;
const MARGIN = 36;

export class ScatterPanel {
  constructor(
    private root: HTMLElement,
    private onSelect: (entityId: number) => void,
  ) {}

  render(indicator: IndicatorResponse, selected: Set<number>): void {
    const points = scatterPoints(indicator.values);
    const labels = [...new Set(indicator.values.map((v) => v.label))].sort(labelCompare);

    const svg = document.createElementNS(SVG_NS, "svg");
    svg.setAttribute("viewBox", `0 0 ${W} ${H}`);
    svg.setAttribute("class", "scatter");

    const xPix = (x: number) => MARGIN + x * (W - 2 * MARGIN - 110);
    const yPix = (y: number) => H - MARGIN - y * (H - 2 * MARGIN);

    for (const label of labels) {
      const summary = indicator.per_label[label];
      if (!summary) continue;
      const band = document.createElementNS(SVG_NS, "rect");
      band.setAttribute("x", String(MARGIN));
      band.setAttribute("width", String(W - 2 * MARGIN - 110));
      band.setAttribute("y", String(yPix(summary.max / 100)));
      band.setAttribute("height", String(Math.max(yPix(summary.min / 100) - yPix(summary.max / 100), 1)));
      band.setAttribute("fill", colorFor(label, labels));
      band.setAttribute("class", "label-band");
      svg.appendChild(band);
    }

    for (const p of points) {
      const dot = document.createElementNS(SVG_NS, "circle");
      dot.setAttribute("cx", String(xPix(p.x)));
      dot.setAttribute("cy", String(yPix(p.y)));
      dot.setAttribute("r", "3");
      dot.setAttribute("fill", colorFor(p.label, labels));
      dot.setAttribute("class", "point");
      dot.dataset.entityId = String(p.id);
      dot.dataset.value = String(p.value);
      dot.addEventListener("click", () => this.onSelect(p.id));
      svg.appendChild(dot);
      if (selected.has(p.id)) {
        const box = document.createElementNS(SVG_NS, "rect");
        box.setAttribute("x", String(xPix(p.x) - 5));
        box.setAttribute("y", String(yPix(p.y) - 5));
        box.setAttribute("width", "10");
        box.setAttribute("height", "10");
        box.setAttribute("class", "highlight");
        svg.appendChild(box);
      }
    }

    labels.forEach((label, i) => {
      const swatch = document.createElementNS(SVG_NS, "circle");
      swatch.setAttribute("cx", String(W - 96));
      swatch.setAttribute("cy", String(MARGIN + 16 * i));
      swatch.setAttribute("r", "4");
      swatch.setAttribute("fill", colorFor(label, labels));
      swatch.setAttribute("class", "legend-entry");
      svg.appendChild(swatch);
      const text = document.createElementNS(SVG_NS, "text");
      text.setAttribute("x", String(W - 86));
      text.setAttribute("y", String(MARGIN + 16 * i + 4));
      text.textContent = label;
      svg.appendChild(text);
    });

    this.root.replaceChildren(svg);
  }
}
