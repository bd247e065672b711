import type { Classification, ReportRow, ReviewItem, VerdictPayload } from "./types.js";

export type FetchLike = (url: string, options?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(message: string, readonly status?: number) {
    super(message);
  }
}

/** Thin client over the documented JSON API; no other endpoints exist. */
export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (u, o) => fetch(u, o),
  ) {}

  private async get<T>(path: string): Promise<T> {
    let resp: Response;
    try {
      resp = await this.fetchImpl(`${this.baseUrl}${path}`);
    } catch (err) {
      throw new ApiError(`API unreachable: ${String(err)}`);
    }
    if (!resp.ok) {
      throw new ApiError(`GET ${path} failed`, resp.status);
    }
    return (await resp.json()) as T;
  }

  fetchSample(perStratum: number, seed: number): Promise<ReviewItem[]> {
    return this.get<ReviewItem[]>(`/api/sample?per_stratum=${perStratum}&seed=${seed}`);
  }

  fetchPair(pairId: string): Promise<ReviewItem> {
    return this.get<ReviewItem>(`/api/pair/${pairId}`);
  }

  fetchReport(): Promise<ReportRow[]> {
    return this.get<ReportRow[]>("/api/report");
  }

  async postVerdict(
    pairId: string,
    classification: Classification,
    reviewerId: string,
  ): Promise<void> {
    const body: VerdictPayload = { classification, reviewer_id: reviewerId };
    let resp: Response;
    try {
      resp = await this.fetchImpl(`${this.baseUrl}/api/pair/${pairId}/verdict`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(body),
      });
    } catch (err) {
      throw new ApiError(`API unreachable: ${String(err)}`);
    }
    if (!resp.ok) {
      throw new ApiError(`verdict POST failed for ${pairId}`, resp.status);
    }
  }
}
