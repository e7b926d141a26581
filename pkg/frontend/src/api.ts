/**
 * HTTP client for the review service.
 *
 * All state changes go through the two POST endpoints; everything else is a
 * read.  Responses are validated against the schemas in schemas.ts before
 * they reach any caller.
 */

import {
  DecisionReceipt,
  PersonPage,
  QueueItem,
  SplitResult,
  decisionReceiptSchema,
  errorBodySchema,
  parseWire,
  personPageSchema,
  queueSchema,
  splitResultSchema,
} from "./schemas";

/** Non-2xx response from the service, with its decoded detail message. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
    this.name = "ApiError";
  }
}

async function errorDetail(response: Response): Promise<string> {
  try {
    const body = errorBodySchema.parse(await response.json());
    if (typeof body.detail === "string") {
      return body.detail;
    }
    return JSON.stringify(body.detail);
  } catch {
    return response.statusText || `status ${response.status}`;
  }
}

export class ApiClient {
  constructor(
    readonly baseUrl: string = "",
    public reviewer: string = "",
  ) {}

  private async request(path: string, init?: RequestInit): Promise<unknown> {
    const response = await fetch(this.baseUrl + path, init);
    if (!response.ok) {
      throw new ApiError(response.status, await errorDetail(response));
    }
    return response.json();
  }

  private post(path: string, body: unknown): Promise<unknown> {
    const headers: Record<string, string> = { "Content-Type": "application/json" };
    if (this.reviewer) {
      headers["X-Reviewer"] = this.reviewer;
    }
    return this.request(path, { method: "POST", headers, body: JSON.stringify(body) });
  }

  async queue(limit = 50, offset = 0): Promise<QueueItem[]> {
    const data = await this.request(`/queue?limit=${limit}&offset=${offset}`);
    return parseWire(queueSchema, data, "GET /queue");
  }

  async decide(candidateId: number, confirm: boolean): Promise<DecisionReceipt> {
    const data = await this.post(`/queue/${candidateId}/decision`, { confirm });
    return parseWire(decisionReceiptSchema, data, "POST /queue/{id}/decision");
  }

  async person(personId: number): Promise<PersonPage> {
    const data = await this.request(`/person/${personId}`);
    return parseWire(personPageSchema, data, "GET /person/{id}");
  }

  async split(personId: number, variantSubset: string[]): Promise<SplitResult> {
    const data = await this.post(`/person/${personId}/split`, {
      variant_subset: variantSubset,
    });
    return parseWire(splitResultSchema, data, "POST /person/{id}/split");
  }
}
