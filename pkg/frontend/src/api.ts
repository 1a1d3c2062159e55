/** Typed client for the four triage-service endpoints. */

export interface PendingItem {
  image_id: string;
  backend: string;
  prompt: string;
}

export interface PendingPage {
  total_pending: number;
  offset: number;
  limit: number;
  items: PendingItem[];
}

export interface SelectionRow {
  group: string;
  generated: number;
  kept: number;
  discarded: number;
  pending: number;
  fraction: number | null;
}

export interface Summary {
  overall: {
    generated: number;
    kept: number;
    discarded: number;
    pending: number;
    fraction: number | null;
  };
  by_backend: SelectionRow[];
  discard_reason_counts: Record<string, number>;
  reasons: string[];
  total_cost_cents: number;
}

export interface DecisionBody {
  image_id: string;
  decision: "keep" | "discard";
  reason: string;
  reviewer?: string;
}

/** Server rejected the request (4xx/5xx) — distinct from connectivity loss. */
export class ApiRejection extends Error {
  constructor(public status: number, detail: string) {
    super(`server rejected request (${status}): ${detail}`);
  }
}

/** What the queue and app need from the API (mockable in tests). */
export interface TriageApiLike {
  imageUrl(imageId: string): string;
  fetchPending(offset?: number, limit?: number): Promise<PendingPage>;
  fetchSummary(): Promise<Summary>;
  submitDecision(body: DecisionBody): Promise<void>;
}

export class TriageApi implements TriageApiLike {
  constructor(private baseUrl: string = "") {}

  imageUrl(imageId: string): string {
    return `${this.baseUrl}/api/image/${encodeURIComponent(imageId)}`;
  }

  async fetchPending(offset = 0, limit = 50): Promise<PendingPage> {
    return this.getJson(`/api/pending?offset=${offset}&limit=${limit}`);
  }

  async fetchSummary(): Promise<Summary> {
    return this.getJson(`/api/summary`);
  }

  async submitDecision(body: DecisionBody): Promise<void> {
    const resp = await fetch(`${this.baseUrl}/api/decision`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!resp.ok) {
      throw new ApiRejection(resp.status, await resp.text());
    }
  }

  private async getJson<T>(path: string): Promise<T> {
    const resp = await fetch(`${this.baseUrl}${path}`);
    if (!resp.ok) {
      throw new ApiRejection(resp.status, await resp.text());
    }
    return (await resp.json()) as T;
  }
}
