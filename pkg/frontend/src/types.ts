/** Wire types for the session API. */

export interface MergeRecord {
  left: number;
  right: number;
  height: number;
  size: number;
}

export interface DendrogramResponse {
  n: number;
  linkage: string;
  merges: MergeRecord[];
  entity_ids: number[];
  version: number;
}

export interface AssignmentEntity {
  id: number;
  name: string;
  group: number;
  label: string;
}

export interface AssignmentResponse {
  version: number;
  n_groups: number;
  labels: string[];
  entities: AssignmentEntity[];
  cut: { mode: string; threshold: number | null; k: number | null };
}

export interface IndicatorValue {
  id: number;
  nl2: number;
  label: string;
}

export interface IndicatorResponse {
  version: number;
  weights: number[];
  values: IndicatorValue[];
  per_label: Record<string, { min: number; median: number; max: number; count: number }>;
}

export interface LedgerEntry {
  target_kind: "entity" | "group";
  target: number;
  from_label: string;
  to_label: string;
  author: string;
  rationale: string;
  timestamp: string;
}

export interface OverridePayload {
  target: number;
  target_kind: "entity" | "group";
  to_label: string;
  rationale: string;
  author?: string;
  base_version: number;
}

export interface CutPayload {
  mode: "by-count" | "by-height";
  value: number;
  mapping?: Record<number, string>;
  base_version?: number;
}
