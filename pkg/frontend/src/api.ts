/** Thin typed client for the /v1 API. The UI talks to nothing else. */

import type {
  AnalyzeAccepted,
  Card,
  EntityType,
  Job,
  ParsedArticle,
  References,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    detail: string,
  ) {
    super(`${code}: ${detail}`);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.base + path, init);
    const body = await response.json();
    if (!response.ok) {
      throw new ApiError(response.status, body.error ?? "unknown", body.detail ?? "");
    }
    return body as T;
  }

  parse(url: string): Promise<ParsedArticle> {
    return this.request("/v1/parse", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ url }),
    });
  }

  analyze(request: {
    text: string;
    image_url?: string;
    image_b64?: string;
    types?: EntityType[];
    language?: string;
  }): Promise<AnalyzeAccepted> {
    return this.request("/v1/analyze", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(request),
    });
  }

  job(jobId: string): Promise<Job> {
    return this.request(`/v1/jobs/${encodeURIComponent(jobId)}`);
  }

  card(kbId: string): Promise<Card> {
    return this.request(`/v1/entities/${encodeURIComponent(kbId)}/card`);
  }

  /** Resolves to null while the entity's evidence has not been crawled yet. */
  async references(kbId: string): Promise<References | null> {
    try {
      return await this.request<References>(
        `/v1/entities/${encodeURIComponent(kbId)}/references`,
      );
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        return null;
      }
      throw error;
    }
  }
}
