// Thin fetch wrapper over the planning service. Errors carry the HTTP
// status so callers can tell a stale-revision conflict from a rejection.

import type {
  BalanceDto,
  CapacityDto,
  EditDto,
  RevisionDto,
  ScenarioDto,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string[],
  ) {
    super(detail.join("; ") || `request failed with status ${status}`);
  }
}

export function isConflict(error: unknown): boolean {
  return error instanceof ApiError && error.status === 409;
}

function asDetail(body: unknown): string[] {
  if (body && typeof body === "object" && "detail" in body) {
    const detail = (body as { detail: unknown }).detail;
    if (Array.isArray(detail)) return detail.map(String);
    if (detail !== undefined && detail !== null) return [String(detail)];
  }
  return [];
}

// The service surface the dashboard uses; tests substitute a scripted fake.
export interface PlanningApi {
  createScenario(): Promise<RevisionDto>;
  getScenario(id: string): Promise<ScenarioDto>;
  getCapacity(id: string): Promise<CapacityDto>;
  pushDelta(id: string, expectedRevision: number, edits: EditDto[]): Promise<RevisionDto>;
  undo(id: string, expectedRevision: number): Promise<RevisionDto>;
  balance(id: string, target: number): Promise<BalanceDto>;
}

export class HttpPlanningApi implements PlanningApi {
  constructor(private readonly baseUrl: string = "") {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json().catch(() => null);
    if (!response.ok) {
      throw new ApiError(response.status, asDetail(payload));
    }
    return payload as T;
  }

  createScenario(): Promise<RevisionDto> {
    return this.request("POST", "/api/scenarios");
  }

  getScenario(id: string): Promise<ScenarioDto> {
    return this.request("GET", `/api/scenarios/${id}`);
  }

  getCapacity(id: string): Promise<CapacityDto> {
    return this.request("GET", `/api/scenarios/${id}/capacity`);
  }

  pushDelta(id: string, expectedRevision: number, edits: EditDto[]): Promise<RevisionDto> {
    return this.request("POST", `/api/scenarios/${id}/delta`, {
      expected_revision: expectedRevision,
      edits,
    });
  }

  undo(id: string, expectedRevision: number): Promise<RevisionDto> {
    return this.request("POST", `/api/scenarios/${id}/undo`, {
      expected_revision: expectedRevision,
    });
  }

  balance(id: string, target: number): Promise<BalanceDto> {
    return this.request("POST", `/api/scenarios/${id}/balance`, { target });
  }
}
