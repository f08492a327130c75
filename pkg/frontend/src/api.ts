/** Typed client for the qgen service. All ordering and scoring comes from
 * the server; this layer only moves bytes. */

import type {
  CatalogResponse,
  ErrorBody,
  QuestionsResponse,
  ResumeResponse,
  SearchResponse,
  SelectResponse,
  SessionCreated,
  UploadResponse,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly errorName: string,
    readonly detail: string,
  ) {
    super(`${errorName}: ${detail}`);
  }
}

function defaultRequestId(): string {
  if (typeof crypto !== "undefined" && "randomUUID" in crypto) {
    return crypto.randomUUID();
  }
  return `req-${Date.now()}-${Math.floor(Math.random() * 1e9)}`;
}

export interface EngineConfig {
  alpha?: number;
  k?: number;
  r_max?: number;
  entity?: string;
  min_slice_size?: number;
  effect_floor?: number;
  measures?: string[];
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
    readonly newRequestId: () => string = defaultRequestId,
  ) {}

  private async request<T>(method: string, path: string, init: RequestInit = {}): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, { method, ...init });
    if (!response.ok) {
      let body: ErrorBody = { error: `HTTP ${response.status}` };
      try {
        body = (await response.json()) as ErrorBody;
      } catch {
        // non-JSON error body; keep the status fallback
      }
      throw new ServiceError(response.status, body.error, body.detail ?? "");
    }
    return (await response.json()) as T;
  }

  catalog(): Promise<CatalogResponse> {
    return this.request("GET", "/catalog");
  }

  uploadDataset(content: string | Blob, name: string): Promise<UploadResponse> {
    return this.request("POST", `/datasets?name=${encodeURIComponent(name)}`, {
      body: content,
      headers: { "Content-Type": "text/csv" },
    });
  }

  createSession(
    datasetId: string,
    questionLimit: number,
    config?: EngineConfig,
  ): Promise<SessionCreated> {
    return this.request("POST", "/sessions", {
      body: JSON.stringify({
        dataset_id: datasetId,
        question_limit: questionLimit,
        ...(config ? { config } : {}),
      }),
      headers: { "Content-Type": "application/json" },
    });
  }

  sessionStatus(sessionId: string): Promise<{ session_id: string; status: string }> {
    return this.request("GET", `/sessions/${sessionId}/status`);
  }

  questions(sessionId: string, top = 10): Promise<QuestionsResponse> {
    return this.request("GET", `/sessions/${sessionId}/questions?top=${top}`);
  }

  select(
    sessionId: string,
    questionId: string,
    requestId: string,
    top = 10,
  ): Promise<SelectResponse> {
    return this.request("POST", `/sessions/${sessionId}/select?top=${top}`, {
      body: JSON.stringify({ question_id: questionId }),
      headers: {
        "Content-Type": "application/json",
        "X-Request-Id": requestId,
      },
    });
  }

  search(sessionId: string, query: string, limit = 10): Promise<SearchResponse> {
    const q = encodeURIComponent(query);
    return this.request("GET", `/sessions/${sessionId}/search?q=${q}&limit=${limit}`);
  }

  async saveSession(sessionId: string): Promise<string> {
    const response = await this.fetchImpl(
      `${this.baseUrl}/sessions/${sessionId}/save`,
      { method: "POST" },
    );
    if (!response.ok) {
      throw new ServiceError(response.status, `HTTP ${response.status}`, "");
    }
    return response.text();
  }

  resumeSession(document: string): Promise<ResumeResponse> {
    return this.request("POST", "/sessions/resume", {
      body: document,
      headers: { "Content-Type": "application/json" },
    });
  }
}
