/** Typed client for the session service; 409s surface as StaleVersionError. */

import type {
  AssignmentResponse,
  CutPayload,
  DendrogramResponse,
  IndicatorResponse,
  LedgerEntry,
  OverridePayload,
} from "./types.js";

export class StaleVersionError extends Error {
  constructor(detail: string) {
    super(detail);
    this.name = "StaleVersionError";
  }
}

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(`${status}: ${detail}`);
    this.name = "ApiError";
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class SessionApi {
  constructor(
    private baseUrl: string = "",
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchImpl(this.baseUrl + path, init);
    if (!resp.ok) {
      const body = await resp.text();
      let detail = body;
      try {
        const doc = JSON.parse(body);
        detail = doc.detail ?? doc.error ?? body;
      } catch {
        // non-JSON error body; keep raw text
      }
      if (resp.status === 409) throw new StaleVersionError(String(detail));
      throw new ApiError(resp.status, String(detail));
    }
    return (await resp.json()) as T;
  }

  private post<T>(path: string, payload: unknown, method = "POST"): Promise<T> {
    return this.request<T>(path, {
      method,
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  async createSession(file: File | Blob, name = "dataset.csv"): Promise<{ id: string; version: number }> {
    const form = new FormData();
    form.append("file", file, name);
    return this.request("/sessions", { method: "POST", body: form });
  }

  listSessions(): Promise<{ sessions: string[] }> {
    return this.request("/sessions");
  }

  dendrogram(sid: string): Promise<DendrogramResponse> {
    return this.request(`/sessions/${sid}/dendrogram`);
  }

  assignment(sid: string): Promise<AssignmentResponse> {
    return this.request(`/sessions/${sid}/assignment`);
  }

  cut(sid: string, payload: CutPayload): Promise<AssignmentResponse> {
    return this.post(`/sessions/${sid}/cut`, payload);
  }

  override(sid: string, payload: OverridePayload): Promise<AssignmentResponse & { ledger_length: number }> {
    return this.post(`/sessions/${sid}/overrides`, payload);
  }

  overrides(sid: string): Promise<{ version: number; entries: LedgerEntry[] }> {
    return this.request(`/sessions/${sid}/overrides`);
  }

  setWeights(sid: string, w: number[], baseVersion?: number): Promise<{ version: number; weights: number[] }> {
    return this.post(`/sessions/${sid}/weights`, { w, base_version: baseVersion ?? null }, "PUT");
  }

  indicator(sid: string): Promise<IndicatorResponse> {
    return this.request(`/sessions/${sid}/indicator`);
  }
}
