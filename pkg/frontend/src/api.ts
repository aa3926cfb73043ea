/** Typed fetch client for the recourse service. */

import type { ExplainRequest, ExplainResponse, FieldError, InstancesPage, Schema } from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public errors: FieldError[],
  ) {
    super(errors.map((e) => `${e.field}: ${e.message}`).join("; ") || `HTTP ${status}`);
  }
}

export class ApiClient {
  constructor(private baseUrl: string) {}

  private async get<T>(path: string): Promise<T> {
    const resp = await fetch(`${this.baseUrl}${path}`);
    if (!resp.ok) {
      throw new ApiError(resp.status, await errorsOf(resp));
    }
    return (await resp.json()) as T;
  }

  health(): Promise<{ status: string; artifact_version: string }> {
    return this.get("/health");
  }

  schema(): Promise<Schema> {
    return this.get("/schema");
  }

  instances(offset = 0, limit = 20): Promise<InstancesPage> {
    return this.get(`/instances?split=test&offset=${offset}&limit=${limit}`);
  }

  async explain(request: ExplainRequest): Promise<ExplainResponse> {
    const resp = await fetch(`${this.baseUrl}/explain`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(request),
    });
    if (!resp.ok) {
      throw new ApiError(resp.status, await errorsOf(resp));
    }
    return (await resp.json()) as ExplainResponse;
  }
}

async function errorsOf(resp: Response): Promise<FieldError[]> {
  try {
    const body = await resp.json();
    if (Array.isArray(body?.errors)) return body.errors as FieldError[];
    if (body?.error_id) return [{ field: "", message: `internal error ${body.error_id}` }];
  } catch {
    // fall through to the generic error below
  }
  return [{ field: "", message: `unexpected response (${resp.status})` }];
}
