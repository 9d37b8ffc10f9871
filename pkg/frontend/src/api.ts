/**
 * HTTP client for the risk service. The fetch implementation is
 * injectable so tests can stub the service without any network.
 */

import type {
  Curve,
  Diagnostic,
  ScenarioDraft,
  ScenarioOutcome,
  UploadOutcome,
} from "./types.js";

export interface HttpResponse {
  status: number;
  json(): Promise<unknown>;
}

export type FetchLike = (
  url: string,
  init?: {
    method?: string;
    headers?: Record<string, string>;
    body?: string;
  },
) => Promise<HttpResponse>;

export type ApiResult<T> =
  | { ok: true; value: T }
  | { ok: false; status: number; diagnostics: Diagnostic[] };

function asDiagnostics(body: unknown, status: number): Diagnostic[] {
  if (
    typeof body === "object" &&
    body !== null &&
    Array.isArray((body as { diagnostics?: unknown }).diagnostics)
  ) {
    return (body as { diagnostics: Diagnostic[] }).diagnostics;
  }
  return [
    {
      severity: "error",
      code: `http_${status}`,
      path: "$",
      message: `service returned status ${status}`,
    },
  ];
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(
    url: string,
    init?: Parameters<FetchLike>[1],
  ): Promise<ApiResult<T>> {
    const response = await this.fetchFn(`${this.baseUrl}${url}`, init);
    const body = await response.json().catch(() => null);
    if (response.status >= 200 && response.status < 300) {
      return { ok: true, value: body as T };
    }
    return {
      ok: false,
      status: response.status,
      diagnostics: asDiagnostics(body, response.status),
    };
  }

  uploadModel(document: string): Promise<ApiResult<UploadOutcome>> {
    return this.request("/models", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: document,
    });
  }

  postScenario(
    modelId: string,
    draft: ScenarioDraft,
  ): Promise<ApiResult<ScenarioOutcome>> {
    return this.request(`/models/${encodeURIComponent(modelId)}/scenarios`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(draft),
    });
  }

  getCurve(
    modelId: string,
    kind: "fragility" | "hazard" | "failure",
    target: string,
  ): Promise<ApiResult<Curve>> {
    const query = `kind=${encodeURIComponent(kind)}&target=${encodeURIComponent(target)}`;
    return this.request(
      `/models/${encodeURIComponent(modelId)}/curves?${query}`,
    );
  }
}
