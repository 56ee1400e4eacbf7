/** Explorer wiring: session picker, dendrogram + cut, palette, ledger,
 * weights, and the indicator scatter, all kept in sync with server versions. */

import { SessionApi, StaleVersionError } from "./api.js";
import { DendrogramPanel } from "./dendrogram.js";
import { GroupPalettePanel, LedgerPanel, StaleBanner, WeightsPanel } from "./panels.js";
import { ScatterPanel } from "./scatter.js";
import {
  initialState,
  markStale,
  toggleEntity,
  withAssignment,
  withIndicator,
  withLedger,
  type OverrideDraft,
  type ViewState,
} from "./state.js";
import type { DendrogramResponse } from "./types.js";

const api = new SessionApi("");
let state: ViewState = initialState();
let tree: DendrogramResponse | null = null;

const el = (id: string): HTMLElement => {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
};

async function refresh(): Promise<void> {
  if (!state.sessionId) return;
  const [assignment, indicator, ledger] = await Promise.all([
    api.assignment(state.sessionId),
    api.indicator(state.sessionId),
    api.overrides(state.sessionId),
  ]);
  state = withLedger(withIndicator(withAssignment(state, assignment), indicator), ledger.entries);
  renderAll();
}

async function guarded(action: () => Promise<void>): Promise<void> {
  try {
    await action();
  } catch (err) {
    if (err instanceof StaleVersionError) {
      state = markStale(state, err.message);
      renderAll();
    } else {
      state = { ...state, error: String(err) };
      renderAll();
    }
  }
}

const callbacks = {
  onReassign(draft: OverrideDraft): void {
    void guarded(async () => {
      await api.override(state.sessionId!, {
        target: draft.target,
        target_kind: draft.targetKind,
        to_label: draft.toLabel,
        rationale: draft.rationale,
        base_version: state.version,
      });
      await refresh();
    });
  },
  onWeights(w: number[]): void {
    void guarded(async () => {
      await api.setWeights(state.sessionId!, w, state.version);
      await refresh();
    });
  },
  onRefresh(): void {
    void guarded(refresh);
  },
};

const dendrogramPanel = () =>
  new DendrogramPanel(el("dendrogram"), {
    onCutHeight(height) {
      void guarded(async () => {
        await api.cut(state.sessionId!, { mode: "by-height", value: height });
        await refresh();
      });
    },
    onSelectEntity(entityId) {
      state = toggleEntity(state, entityId);
      renderAll();
    },
  });

function renderAll(): void {
  new StaleBanner(el("banner"), callbacks).render(state.stale, state.error);
  if (tree) dendrogramPanel().render(tree, state.assignment);
  if (state.assignment) {
    new GroupPalettePanel(el("palette"), callbacks).render(state.assignment, state.selectedEntities);
  }
  if (state.indicator) {
    new ScatterPanel(el("scatter"), (id) => {
      state = toggleEntity(state, id);
      renderAll();
    }).render(state.indicator, state.selectedEntities);
    new WeightsPanel(el("weights"), callbacks).render(state.indicator.weights);
  }
  new LedgerPanel(el("ledger")).render(state.ledger);
  if (state.sessionId) {
    // Read-only companion charts, re-fetched per version so they track edits.
    (el("radial-panel") as HTMLImageElement).src =
      `/sessions/${state.sessionId}/charts/radial.svg?v=${state.version}`;
    (el("boxplot-panel") as HTMLImageElement).src =
      `/sessions/${state.sessionId}/charts/boxplot.svg?v=${state.version}`;
  }
  el("version").textContent = state.sessionId
    ? `session ${state.sessionId} @ v${state.version}`
    : "no session";
}

async function openSession(sid: string): Promise<void> {
  state = { ...initialState(), sessionId: sid };
  tree = await api.dendrogram(sid);
  await refresh();
}

function wireControls(): void {
  const upload = el("upload") as HTMLInputElement;
  upload.addEventListener("change", () => {
    const file = upload.files?.[0];
    if (!file) return;
    void guarded(async () => {
      const { id } = await api.createSession(file, file.name);
      await openSession(id);
    });
  });

  const picker = el("session-picker") as HTMLSelectElement;
  void api.listSessions().then(({ sessions }) => {
    for (const sid of sessions) {
      const option = document.createElement("option");
      option.value = sid;
      option.textContent = sid;
      picker.appendChild(option);
    }
  });
  picker.addEventListener("change", () => {
    if (picker.value) void guarded(() => openSession(picker.value));
  });

  const applyK = el("apply-k") as HTMLButtonElement;
  applyK.addEventListener("click", () => {
    const k = Number((el("cut-k") as HTMLInputElement).value);
    if (!Number.isFinite(k) || k < 1) return;
    void guarded(async () => {
      await api.cut(state.sessionId!, { mode: "by-count", value: k });
      await refresh();
    });
  });
}

if (typeof document !== "undefined" && document.getElementById("dendrogram")) {
  wireControls();
  renderAll();
}
