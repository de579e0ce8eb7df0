import type {
  Citation,
  FrequencyEntry,
  GraphPayload,
  JobRecord,
  MetricsPayload,
  ModelRequest,
  PreprocessResponse,
} from "./types.js";

/** Non-2xx response, carrying the service's `detail` message when present. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    detail: string,
  ) {
    super(detail);
    this.name = "ApiError";
  }
}

export interface ClientOptions {
  /** Origin prefix for requests; empty string targets the page's own origin. */
  baseUrl?: string;
  /** Fetch implementation, injectable for tests. */
  fetchImpl?: typeof fetch;
}

export interface PreprocessOptions {
  keepInterviewer: boolean;
  extraStopwords: string[];
}

/** Thin typed wrapper over the service's REST routes. */
export class ApiClient {
  private readonly base: string;
  private readonly fetchImpl: typeof fetch;

  constructor(options: ClientOptions = {}) {
    this.base = (options.baseUrl ?? "").replace(/\/$/, "");
    this.fetchImpl = options.fetchImpl ?? fetch.bind(globalThis);
  }

  async uploadCorpus(files: File[]): Promise<string> {
    const form = new FormData();
    for (const file of files) {
      form.append("files", file, file.name);
    }
    const body = await this.request("POST", "/api/corpus", { body: form });
    return (body as { corpus_id: string }).corpus_id;
  }

  async preprocess(corpusId: string, options: PreprocessOptions): Promise<PreprocessResponse> {
    const body = await this.requestJson("POST", `/api/corpus/${corpusId}/preprocess`, {
      keep_interviewer: options.keepInterviewer,
      extra_stopwords: options.extraStopwords,
    });
    return body as PreprocessResponse;
  }

  async frequencies(corpusId: string, limit?: number): Promise<FrequencyEntry[]> {
    const query = limit === undefined ? "" : `?limit=${limit}`;
    const body = await this.request("GET", `/api/corpus/${corpusId}/frequencies${query}`);
    return body as FrequencyEntry[];
  }

  async startModel(corpusId: string, request: ModelRequest): Promise<string> {
    const body = await this.requestJson("POST", `/api/corpus/${corpusId}/models`, request);
    return (body as { job_id: string }).job_id;
  }

  async job(jobId: string): Promise<JobRecord> {
    const body = await this.request("GET", `/api/jobs/${jobId}`);
    return body as JobRecord;
  }

  async graph(modelId: string): Promise<GraphPayload> {
    const body = await this.request("GET", `/api/models/${modelId}/graph`);
    return body as GraphPayload;
  }

  async metrics(modelId: string): Promise<MetricsPayload> {
    const body = await this.request("GET", `/api/models/${modelId}/metrics`);
    return body as MetricsPayload;
  }

  async citations(modelId: string, lemma: string): Promise<Citation[]> {
    const encoded = encodeURIComponent(lemma);
    const body = await this.request("GET", `/api/models/${modelId}/keywords/${encoded}/citations`);
    return body as Citation[];
  }

  private async requestJson(method: string, path: string, payload: unknown): Promise<unknown> {
    return this.request(method, path, {
      body: JSON.stringify(payload),
      headers: { "content-type": "application/json" },
    });
  }

  private async request(
    method: string,
    path: string,
    init: { body?: BodyInit; headers?: Record<string, string> } = {},
  ): Promise<unknown> {
    const response = await this.fetchImpl(this.base + path, { method, ...init });
    if (!response.ok) {
      throw new ApiError(response.status, await readDetail(response));
    }
    return response.json();
  }
}

async function readDetail(response: Response): Promise<string> {
  try {
    const body: unknown = await response.json();
    if (body && typeof body === "object" && typeof (body as { detail?: unknown }).detail === "string") {
      return (body as { detail: string }).detail;
    }
  } catch {
    // fall through to the status line for non-JSON error bodies
  }
  return `${response.status} ${response.statusText}`.trim();
}
