/** Thin client over the pipeline HTTP API with a per-story cache, so
 * toggling between views never refetches analysis data. */

import type { AnalysisPayload, StorySummary } from "./types";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

async function getJson<T>(url: string): Promise<T> {
  const response = await fetch(url);
  if (!response.ok) {
    throw new ApiError(response.status, `${url} returned ${response.status}`);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  private readonly analyses = new Map<string, AnalysisPayload>();

  constructor(readonly baseUrl: string) {}

  async listStories(): Promise<StorySummary[]> {
    return getJson<StorySummary[]>(`${this.baseUrl}/stories`);
  }

  async analysis(storyId: string): Promise<AnalysisPayload> {
    const cached = this.analyses.get(storyId);
    if (cached !== undefined) {
      return cached;
    }
    const payload = await getJson<AnalysisPayload>(
      `${this.baseUrl}/stories/${encodeURIComponent(storyId)}/analysis`,
    );
    this.analyses.set(storyId, payload);
    return payload;
  }

  async requestAnalysis(storyId: string): Promise<{ status: string }> {
    const response = await fetch(
      `${this.baseUrl}/stories/${encodeURIComponent(storyId)}/analyze`,
      { method: "POST" },
    );
    if (!response.ok) {
      throw new ApiError(response.status, `analyze returned ${response.status}`);
    }
    return (await response.json()) as { status: string };
  }
}
