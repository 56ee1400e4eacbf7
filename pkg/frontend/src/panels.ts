/** Side panels: group chips with drag-reassignment onto the label palette,
 * the override ledger, the weights editor, and the stale-view banner. */

import { colorFor, distinctGroups } from "./layout.js";
import { draftReady, type OverrideDraft } from "./state.js";
import type { AssignmentResponse, LedgerEntry } from "./types.js";

export interface PanelCallbacks {
  onReassign(draft: OverrideDraft): void;
  onWeights(w: number[]): void;
  onRefresh(): void;
}

export class GroupPalettePanel {
  constructor(
    private root: HTMLElement,
    private callbacks: PanelCallbacks,
  ) {}

  render(assignment: AssignmentResponse, selectedEntities: Set<number>): void {
    const container = document.createElement("div");
    container.className = "palette";

    const groups = document.createElement("div");
    groups.className = "group-chips";
    for (const gid of distinctGroups(assignment.entities)) {
      const members = assignment.entities.filter((e) => e.group === gid);
      const chip = document.createElement("div");
      chip.className = "group-chip";
      chip.draggable = true;
      chip.dataset.groupId = String(gid);
      chip.textContent = `G${gid} (${members.length}) -> ${members[0].label}`;
      chip.addEventListener("dragstart", (ev) => {
        ev.dataTransfer?.setData("application/x-target", JSON.stringify({ kind: "group", id: gid }));
      });
      groups.appendChild(chip);
    }
    for (const id of selectedEntities) {
      const entity = assignment.entities.find((e) => e.id === id);
      if (!entity) continue;
      const chip = document.createElement("div");
      chip.className = "entity-chip";
      chip.draggable = true;
      chip.textContent = `#${entity.id} ${entity.name} (${entity.label})`;
      chip.addEventListener("dragstart", (ev) => {
        ev.dataTransfer?.setData("application/x-target", JSON.stringify({ kind: "entity", id }));
      });
      groups.appendChild(chip);
    }
    container.appendChild(groups);

    const slots = document.createElement("div");
    slots.className = "label-slots";
    for (const label of assignment.labels) {
      const slot = document.createElement("div");
      slot.className = "label-slot";
      slot.dataset.label = label;
      slot.style.borderColor = colorFor(label, assignment.labels);
      slot.textContent = label;
      slot.addEventListener("dragover", (ev) => ev.preventDefault());
      slot.addEventListener("drop", (ev) => {
        ev.preventDefault();
        const raw = ev.dataTransfer?.getData("application/x-target");
        if (!raw) return;
        const target = JSON.parse(raw) as { kind: "entity" | "group"; id: number };
        const rationale = window.prompt(`Why move ${target.kind} ${target.id} to ${label}?`) ?? "";
        const draft: OverrideDraft = {
          targetKind: target.kind,
          target: target.id,
          toLabel: label,
          rationale,
        };
        if (!draftReady(draft)) {
          window.alert("A rationale is required: reassignments are audited.");
          return;
        }
        this.callbacks.onReassign(draft);
      });
      slots.appendChild(slot);
    }
    container.appendChild(slots);
    this.root.replaceChildren(container);
  }
}

export class LedgerPanel {
  constructor(private root: HTMLElement) {}

  render(entries: LedgerEntry[]): void {
    const list = document.createElement("ol");
    list.className = "ledger";
    for (const entry of entries) {
      const item = document.createElement("li");
      item.className = "ledger-entry";
      item.textContent =
        `${entry.target_kind} ${entry.target}: ${entry.from_label} -> ${entry.to_label}` +
        ` (${entry.rationale})`;
      list.appendChild(item);
    }
    this.root.replaceChildren(list);
  }
}

export class WeightsPanel {
  constructor(
    private root: HTMLElement,
    private callbacks: PanelCallbacks,
  ) {}

  render(weights: number[]): void {
    const form = document.createElement("form");
    form.className = "weights";
    const inputs: HTMLInputElement[] = [];
    weights.forEach((w, i) => {
      const row = document.createElement("label");
      row.textContent = `x${i + 1}`;
      const input = document.createElement("input");
      input.type = "number";
      input.step = "0.01";
      input.min = "0";
      input.value = String(w);
      input.dataset.attr = String(i);
      inputs.push(input);
      row.appendChild(input);
      form.appendChild(row);
    });
    const apply = document.createElement("button");
    apply.type = "submit";
    apply.textContent = "Apply weights";
    form.appendChild(apply);
    form.addEventListener("submit", (ev) => {
      ev.preventDefault();
      const raw = inputs.map((inp) => Number(inp.value));
      const sum = raw.reduce((a, b) => a + b, 0);
      if (sum <= 0) return;
      this.callbacks.onWeights(raw.map((v) => v / sum));
    });
    this.root.replaceChildren(form);
  }
}

export class StaleBanner {
  constructor(
    private root: HTMLElement,
    private callbacks: PanelCallbacks,
  ) {}

  render(stale: boolean, detail: string | null): void {
    if (!stale) {
      this.root.replaceChildren();
      return;
    }
    const banner = document.createElement("div");
    banner.className = "stale-banner";
    banner.textContent = `View is stale: ${detail ?? "another specialist edited this session"}. `;
    const refresh = document.createElement("button");
    refresh.textContent = "Refresh";
    refresh.addEventListener("click", () => this.callbacks.onRefresh());
    banner.appendChild(refresh);
    this.root.replaceChildren(banner);
  }
}
