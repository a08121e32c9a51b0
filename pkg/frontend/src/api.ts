// Thin fetch client for the cfx service; every explorer action maps 1:1
// onto one of these calls.  Raw request and response text are preserved so
// history replays can be compared byte for byte.

import type {
  ConditionRequest,
  ExplainRequestOptions,
  ExplanationFile,
  InstanceValues,
  ModelArtifact,
  ModelMeta,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

export interface WireRequest {
  method: string;
  path: string;
  body?: string;
}

export interface ApiResponse<T> {
  payload: T;
  raw: string;
  request: WireRequest;
}

export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async call<T>(method: string, path: string, body?: unknown): Promise<ApiResponse<T>> {
    const request: WireRequest = { method, path };
    const init: RequestInit = { method };
    if (body !== undefined) {
      request.body = typeof body === "string" ? body : JSON.stringify(body);
      init.body = request.body;
      init.headers = { "Content-Type": "application/json" };
    }
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    const raw = await response.text();
    if (!response.ok) {
      let detail = raw;
      try {
        const parsed = JSON.parse(raw) as { detail?: string; error?: string };
        detail = parsed.detail ?? parsed.error ?? raw;
      } catch {
        // leave raw text as the detail
      }
      throw new ApiError(response.status, detail);
    }
    return { payload: JSON.parse(raw) as T, raw, request };
  }

  health() {
    return this.call<{ status: string }>("GET", "/v1/health");
  }

  listModels() {
    return this.call<{ models: ModelMeta[] }>("GET", "/v1/models");
  }

  getModel(id: string) {
    return this.call<ModelArtifact>("GET", `/v1/models/${id}`);
  }

  uploadModel(artifactJson: string) {
    return this.call<ModelMeta>("POST", "/v1/models", artifactJson);
  }

  predict(modelId: string, instance: InstanceValues) {
    return this.call<{ class: 0 | 1; model_id: string }>(
      "POST",
      `/v1/models/${modelId}/predict`,
      { instance },
    );
  }

  counterfactual(
    modelId: string,
    instance: InstanceValues,
    conditions: ConditionRequest[],
    options: ExplainRequestOptions = {},
  ) {
    return this.call<ExplanationFile>("POST", `/v1/models/${modelId}/counterfactual`, {
      instance,
      conditions,
      ...options,
    });
  }

  robustness(modelId: string, instance: InstanceValues, seed = 0) {
    return this.call<ExplanationFile>("POST", `/v1/models/${modelId}/robustness`, {
      instance,
      seed,
    });
  }

  primeImplicants(modelId: string, instance: InstanceValues, keep: string[], seed = 0) {
    return this.call<ExplanationFile>("POST", `/v1/models/${modelId}/prime-implicants`, {
      instance,
      keep,
      seed,
    });
  }

  /** Re-issue a stored request verbatim; used for history re-runs. */
  replay(request: WireRequest) {
    return this.call<unknown>(request.method, request.path, request.body);
  }
}
