import { ApiClient } from "./api.js";
import { VerdictQueue } from "./queue.js";
import type { Classification, ReportRow, ReviewItem } from "./types.js";

export interface SessionState {
  items: ReviewItem[];
  index: number;
  submitted: number;
  report: ReportRow[];
  queueLength: number;
  error: string | null;
}

/**
 * Drives one review pass: load a stratified sample, step through the cards,
 * POST each verdict immediately (queueing it for retry when the API is
 * unreachable), and refresh the live report after every submission.
 * DOM-free on purpose: the UI layer subscribes to state changes and a
 * scripted session can drive it headlessly.
 */
export class ReviewSession {
  private items: ReviewItem[] = [];
  private index = 0;
  private submitted = 0;
  private report: ReportRow[] = [];
  private error: string | null = null;
  private listeners: Array<(state: SessionState) => void> = [];

  constructor(
    private readonly api: ApiClient,
    private readonly queue: VerdictQueue,
    readonly reviewerId: string,
  ) {}

  onChange(listener: (state: SessionState) => void): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    const state = this.state();
    for (const listener of this.listeners) {
      listener(state);
    }
  }

  state(): SessionState {
    return {
      items: this.items,
      index: this.index,
      submitted: this.submitted,
      report: this.report,
      queueLength: this.queue.length,
      error: this.error,
    };
  }

  current(): ReviewItem | null {
    return this.items[this.index] ?? null;
  }

  done(): boolean {
    return this.items.length > 0 && this.index >= this.items.length;
  }

  /** Strata present in the sample, with progress, for the tab bar. */
  strata(): Array<{ k: number; total: number; position: number }> {
    const byK = new Map<number, { total: number; position: number }>();
    this.items.forEach((item, i) => {
      const k = item.features.n_common_names;
      const entry = byK.get(k) ?? { total: 0, position: 0 };
      entry.total += 1;
      if (i < this.index) entry.position += 1;
      byK.set(k, entry);
    });
    return [...byK.entries()]
      .sort((a, b) => a[0] - b[0])
      .map(([k, v]) => ({ k, ...v }));
  }

  /** Jump to the first unreviewed card of a stratum. */
  jumpToStratum(k: number): void {
    const target = this.items.findIndex(
      (item, i) => i >= this.index && item.features.n_common_names === k,
    );
    if (target >= 0) {
      this.index = target;
      this.notify();
    }
  }

  async loadSample(perStratum: number, seed: number): Promise<void> {
    try {
      this.items = await this.api.fetchSample(perStratum, seed);
      this.index = 0;
      this.submitted = 0;
      this.error = null;
      await this.refreshReport();
    } catch (err) {
      this.error = String(err);
    }
    this.notify();
  }

  async refreshReport(): Promise<void> {
    try {
      this.report = await this.api.fetchReport();
      this.error = null;
    } catch (err) {
      this.error = String(err);
    }
  }

  /**
   * Record the verdict for the current card and advance. A failed POST is
   * kept in the retry queue; the session still advances so a flaky network
   * never blocks the reviewer.
   */
  async submit(classification: Classification): Promise<void> {
    const item = this.current();
    if (!item) return;
    try {
      await this.api.postVerdict(item.pair_id, classification, this.reviewerId);
      this.submitted += 1;
      await this.refreshReport();
    } catch {
      this.queue.enqueue({
        pairId: item.pair_id,
        classification,
        reviewerId: this.reviewerId,
      });
      this.error = "verdict queued: API unreachable";
    }
    this.index += 1;
    this.notify();
  }

  /** Retry queued verdicts (call on reconnect / timer). */
  async flushQueue(): Promise<number> {
    const { sent } = await this.queue.flush((q) =>
      this.api.postVerdict(q.pairId, q.classification, q.reviewerId),
    );
    if (sent > 0) {
      this.submitted += sent;
      this.error = null;
      await this.refreshReport();
      this.notify();
    }
    return sent;
  }
}
