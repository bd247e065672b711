import type { Classification } from "./types.js";

export interface QueuedVerdict {
  pairId: string;
  classification: Classification;
  reviewerId: string;
}

export interface QueueStorage {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
}

const KEY = "patlink_verdict_queue";

/** In-memory map standing in for localStorage outside the browser. */
export class MemoryStorage implements QueueStorage {
  private data = new Map<string, string>();
  getItem(key: string): string | null {
    return this.data.get(key) ?? null;
  }
  setItem(key: string, value: string): void {
    this.data.set(key, value);
  }
}

/**
 * Verdicts that failed to POST wait here and are retried on the next flush,
 * surviving page reloads via the storage backend. Re-queuing the same pair
 * replaces the stale verdict: last decision wins, matching the server.
 */
export class VerdictQueue {
  constructor(private readonly storage: QueueStorage) {}

  private load(): QueuedVerdict[] {
    try {
      return JSON.parse(this.storage.getItem(KEY) || "[]") as QueuedVerdict[];
    } catch {
      return [];
    }
  }

  private save(queue: QueuedVerdict[]): void {
    this.storage.setItem(KEY, JSON.stringify(queue));
  }

  get length(): number {
    return this.load().length;
  }

  pending(): QueuedVerdict[] {
    return this.load();
  }

  enqueue(item: QueuedVerdict): void {
    const queue = this.load().filter(
      (q) => !(q.pairId === item.pairId && q.reviewerId === item.reviewerId),
    );
    queue.push(item);
    this.save(queue);
  }

  /** Retry every queued verdict; items whose POST fails again stay queued. */
  async flush(
    post: (item: QueuedVerdict) => Promise<void>,
  ): Promise<{ sent: number; remaining: number }> {
    const queue = this.load();
    const remaining: QueuedVerdict[] = [];
    let sent = 0;
    for (const item of queue) {
      try {
        await post(item);
        sent += 1;
      } catch {
        remaining.push(item);
      }
    }
    this.save(remaining);
    return { sent, remaining: remaining.length };
  }
}
