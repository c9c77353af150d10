import type {
  MismatchRow,
  PatchRecord,
  Prediction,
  StatsReport,
  TaxonomyEntry,
  TrainReport,
} from "./types.js";

/** Error raised for any non-2xx response, carrying the service's error shape. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly error: string,
    readonly detail: string,
  ) {
    super(`${error}: ${detail}`);
    this.name = "ApiError";
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/**
 * Typed client for the patchtriage service.
 *
 * The fetch function is injectable so tests can run against an in-memory
 * server and so the base URL can point at a different origin.
 */
export class ApiClient {
  private readonly base: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl = "", fetchFn?: FetchLike) {
    // Same-origin by default; a trailing slash would double up with /api paths.
    this.base = baseUrl.replace(/\/+$/, "");
    this.fetchFn = fetchFn ?? ((url, init) => fetch(url, init));
  }

  taxonomy(): Promise<TaxonomyEntry[]> {
    return this.request("GET", "/api/taxonomy");
  }

  /** First patch in queue order, or null when the queue is exhausted (204). */
  nextPatch(unlabeledOnly = true): Promise<PatchRecord | null> {
    return this.requestOptional("GET", `/api/patches/next?unlabeled=${unlabeledOnly}`);
  }

  getPatch(patchId: string): Promise<PatchRecord> {
    return this.request("GET", `/api/patches/${encodeURIComponent(patchId)}`);
  }

  labelPatch(patchId: string, category: number, annotator = "anonymous"): Promise<PatchRecord> {
    return this.request("POST", `/api/patches/${encodeURIComponent(patchId)}/label`, {
      category,
      annotator,
    });
  }

  train(): Promise<TrainReport> {
    return this.request("POST", "/api/train");
  }

  predict(summary: string): Promise<Prediction> {
    return this.request("POST", "/api/predict", { summary });
  }

  stats(by: "auto" | "manual" = "auto"): Promise<StatsReport> {
    return this.request("GET", `/api/stats?by=${by}`);
  }

  mismatches(): Promise<MismatchRow[]> {
    return this.request("GET", "/api/mismatches");
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const result = await this.requestOptional<T>(method, path, body);
    if (result === null) {
      throw new ApiError(204, "EmptyResponse", `unexpected empty response from ${path}`);
    }
    return result;
  }

  private async requestOptional<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T | null> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(this.base + path, init);
    if (response.status === 204) {
      return null;
    }
    if (!response.ok) {
      throw await toApiError(response);
    }
    return (await response.json()) as T;
  }
}

async function toApiError(response: Response): Promise<ApiError> {
  let parsed: unknown = null;
  try {
    parsed = await response.json();
  } catch {
    // Not JSON; fall through to the generic error below.
  }
  if (parsed && typeof parsed === "object") {
    const body = parsed as { error?: unknown; detail?: unknown };
    if (typeof body.error === "string") {
      return new ApiError(response.status, body.error, String(body.detail ?? ""));
    }
    // FastAPI-level errors (validation, bad query values) only carry "detail".
    if (body.detail !== undefined) {
      const detail =
        typeof body.detail === "string" ? body.detail : JSON.stringify(body.detail);
      return new ApiError(response.status, "HTTPError", detail);
    }
  }
  return new ApiError(
    response.status,
    "HTTPError",
    response.statusText || `status ${response.status}`,
  );
}
