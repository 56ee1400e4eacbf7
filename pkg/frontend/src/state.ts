/** View state: what the explorer believes the server currently holds.
 *
 * All truth lives server-side; this layer only tracks the displayed version,
 * the pending override draft, and whether the view went stale after a 409.
 */

import type { AssignmentResponse, IndicatorResponse, LedgerEntry } from "./types.js";

export interface OverrideDraft {
  targetKind: "entity" | "group";
  target: number;
  toLabel: string;
  rationale: string;
}

export interface ViewState {
  sessionId: string | null;
  version: number;
  assignment: AssignmentResponse | null;
  indicator: IndicatorResponse | null;
  ledger: LedgerEntry[];
  selectedEntities: Set<number>;
  selectedGroup: number | null;
  stale: boolean;
  error: string | null;
  draft: OverrideDraft | null;
}

export function initialState(): ViewState {
  return {
    sessionId: null,
    version: 0,
    assignment: null,
    indicator: null,
    ledger: [],
    selectedEntities: new Set(),
    selectedGroup: null,
    stale: false,
    error: null,
    draft: null,
  };
}

export function withAssignment(state: ViewState, assignment: AssignmentResponse): ViewState {
  return { ...state, assignment, version: assignment.version, stale: false, error: null };
}

export function withIndicator(state: ViewState, indicator: IndicatorResponse): ViewState {
  return { ...state, indicator, version: Math.max(state.version, indicator.version) };
}

export function withLedger(state: ViewState, entries: LedgerEntry[]): ViewState {
  return { ...state, ledger: entries };
}

export function markStale(state: ViewState, detail: string): ViewState {
  return { ...state, stale: true, error: detail };
}

export function toggleEntity(state: ViewState, id: number): ViewState {
  const selected = new Set(state.selectedEntities);
  if (selected.has(id)) selected.delete(id);
  else selected.add(id);
  return { ...state, selectedEntities: selected };
}

/** A draft is postable only with a non-empty rationale: the ledger is an audit trail. */
export function draftReady(draft: OverrideDraft | null): boolean {
  return draft !== null && draft.rationale.trim().length > 0 && draft.toLabel.length > 0;
}

export function groupCountDisplayed(state: ViewState): number {
  if (!state.assignment) return 0;
  return new Set(state.assignment.entities.map((e) => e.group)).size;
}
