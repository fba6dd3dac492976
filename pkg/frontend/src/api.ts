// HTTP client for the session service. Thin and stateless: every call
// returns the server's authoritative report; nothing is inferred locally.

import type { FactValue, Report, RetractionHint, Role } from "./types.js";

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;
  readonly hints: RetractionHint[];

  constructor(status: number, code: string, message: string, hints: RetractionHint[] = []) {
    super(message);
    this.status = status;
    this.code = code;
    this.hints = hints;
  }
}

/** Transport failure: the request may not have reached the server. */
export class NetworkError extends Error {
  constructor(cause: unknown) {
    super("network failure: " + String(cause));
  }
}

interface CreateResponse {
  id: string;
  report: Report;
}

export class SessionApi {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: typeof fetch = (...args) => fetch(...args),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<unknown> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.baseUrl + path, init);
    } catch (cause) {
      throw new NetworkError(cause);
    }
    const body = (await response.json()) as Record<string, unknown>;
    if (!response.ok) {
      const error = (body.error ?? {}) as Record<string, unknown>;
      throw new ApiError(
        response.status,
        typeof error.code === "string" ? error.code : "unknown",
        typeof error.message === "string" ? error.message : response.statusText,
        Array.isArray(error.hints) ? (error.hints as RetractionHint[]) : [],
      );
    }
    return body;
  }

  private post(path: string, payload: unknown): Promise<unknown> {
    return this.request(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  async createSession(kbText: string): Promise<CreateResponse> {
    return (await this.post("/sessions", { kb: kbText })) as CreateResponse;
  }

  async postFact(id: string, symbol: string, value: FactValue, role: Role): Promise<Report> {
    const body = (await this.post(`/sessions/${id}/facts`, { symbol, value, role })) as {
      report: Report;
    };
    return body.report;
  }

  async deleteFact(id: string, symbol: string): Promise<Report> {
    const body = (await this.request(`/sessions/${id}/facts/${symbol}`, {
      method: "DELETE",
    })) as { report: Report };
    return body.report;
  }

  async getReport(id: string, mode: "exact" | "approx" = "approx"): Promise<Report> {
    const body = (await this.request(`/sessions/${id}/report?mode=${mode}`)) as {
      report: Report;
    };
    return body.report;
  }

  async getSolutions(id: string, limit = 10): Promise<Record<string, FactValue>[]> {
    const body = (await this.request(`/sessions/${id}/solutions?limit=${limit}`)) as {
      models: Record<string, FactValue>[];
    };
    return body.models;
  }
}
