/** Pending-queue state machine with optimistic decisions.
 *
 * The UI advances the moment the user decides; the POST runs in the
 * background. A server rejection puts the item back at the queue head; a
 * connectivity failure buffers the decision and replays it before the next
 * network interaction. The server stays the single source of truth — this
 * class holds no state a reload cannot rebuild.
 */

import { ApiRejection, PendingItem, Summary, TriageApiLike } from "./api.js";

export type QueueEvent =
  | { kind: "state" }
  | { kind: "toast"; message: string }
  | { kind: "offline"; buffered: number }
  | { kind: "online" };

export interface QueueDecision {
  imageId: string;
  decision: "keep" | "discard";
  reason: string;
}

const PAGE_LIMIT = 50;

export class TriageQueue {
  current: PendingItem | null = null;
  totalAtStart = 0;
  decidedCount = 0;
  summary: Summary | null = null;
  loadError: string | null = null;

  private upcoming: PendingItem[] = [];
  private inFlight = new Set<string>();
  private locallyDecided = new Set<string>();
  private replayBuffer: QueueDecision[] = [];
  private listeners: ((event: QueueEvent) => void)[] = [];

  constructor(private api: TriageApiLike) {}

  onEvent(listener: (event: QueueEvent) => void): void {
    this.listeners.push(listener);
  }

  private emit(event: QueueEvent): void {
    for (const listener of this.listeners) listener(event);
  }

  get position(): number {
    return Math.min(this.decidedCount + 1, this.totalAtStart);
  }

  get done(): boolean {
    return this.current === null && this.upcoming.length === 0 && this.loadError === null;
  }

  get bufferedCount(): number {
    return this.replayBuffer.length;
  }

  /** Initial load (or retry after a failure): first page + summary. */
  async start(): Promise<void> {
    this.loadError = null;
    try {
      const page = await this.api.fetchPending(0, PAGE_LIMIT);
      this.totalAtStart = page.total_pending;
      this.upcoming = page.items.filter((item) => !this.locallyDecided.has(item.image_id));
      this.current = this.upcoming.shift() ?? null;
      await this.refreshSummary();
    } catch (err) {
      this.loadError = String(err);
    }
    this.emit({ kind: "state" });
  }

  async refreshSummary(): Promise<void> {
    try {
      this.summary = await this.api.fetchSummary();
    } catch {
      // summary is cosmetic; decisions still flow
    }
  }

  /** Decide the current item and advance optimistically. */
  decide(decision: "keep" | "discard", reason = "none"): boolean {
    const item = this.current;
    if (!item) return false;
    if (decision === "discard" && (reason === "" || reason === "none")) {
      this.emit({ kind: "toast", message: "pick a discard reason first" });
      return false;
    }
    if (this.inFlight.has(item.image_id) || this.locallyDecided.has(item.image_id)) {
      return false; // double-submit guard
    }
    this.locallyDecided.add(item.image_id);
    this.inFlight.add(item.image_id);
    this.decidedCount += 1;
    void this.advance();
    this.emit({ kind: "state" });
    void this.push({ imageId: item.image_id, decision, reason }, item);
    return true;
  }

  private async advance(): Promise<void> {
    this.current = this.upcoming.shift() ?? null;
    if (this.current === null) {
      await this.fetchMore();
    }
    this.emit({ kind: "state" });
  }

  private async fetchMore(): Promise<void> {
    try {
      // decided items leave the server's pending set, so the next page is
      // always at offset 0 (minus anything we already know about locally)
      const page = await this.api.fetchPending(0, PAGE_LIMIT);
      const fresh = page.items.filter(
        (item) => !this.locallyDecided.has(item.image_id) && !this.inFlight.has(item.image_id),
      );
      if (fresh.length > 0) {
        this.current = fresh[0] ?? null;
        this.upcoming = fresh.slice(1);
      }
    } catch {
      // stay in the done/error state; a retry re-enters through start()
    }
  }

  private async push(decision: QueueDecision, item: PendingItem): Promise<void> {
    try {
      await this.replayPending();
      await this.api.submitDecision({
        image_id: decision.imageId,
        decision: decision.decision,
        reason: decision.reason,
      });
      this.inFlight.delete(decision.imageId);
      await this.refreshSummary();
      this.emit({ kind: "state" });
    } catch (err) {
      this.inFlight.delete(decision.imageId);
      if (err instanceof ApiRejection) {
        // server said no: undo the optimistic advance, re-queue at the head
        this.locallyDecided.delete(decision.imageId);
        this.decidedCount -= 1;
        if (this.current) this.upcoming.unshift(this.current);
        this.current = item;
        this.emit({ kind: "toast", message: `decision rejected: ${err.message}` });
        this.emit({ kind: "state" });
      } else {
        // network loss: buffer and replay later
        this.replayBuffer.push(decision);
        this.emit({ kind: "offline", buffered: this.replayBuffer.length });
      }
    }
  }

  /** Flush buffered decisions in order; throws while connectivity is down.
   * A decision the server explicitly rejects is dropped with a toast so it
   * can never wedge the buffer. */
  async replayPending(): Promise<void> {
    while (this.replayBuffer.length > 0) {
      const queued = this.replayBuffer[0];
      if (!queued) break;
      try {
        await this.api.submitDecision({
          image_id: queued.imageId,
          decision: queued.decision,
          reason: queued.reason,
        });
        this.replayBuffer.shift();
      } catch (err) {
        if (err instanceof ApiRejection) {
          this.replayBuffer.shift();
          this.emit({ kind: "toast", message: `buffered decision dropped: ${err.message}` });
          continue;
        }
        throw err;
      }
    }
    if (this.replayBuffer.length === 0) {
      this.emit({ kind: "online" });
    }
  }
}
