import type {
  PutAssessmentResponse,
  QueuePage,
  Rating,
  ReviewItemPayload,
  SummaryPayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number | null,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function requestJson<T>(url: string, init?: RequestInit): Promise<T> {
  let resp: Response;
  try {
    resp = await fetch(url, init);
  } catch (err) {
    throw new ApiError(`cannot reach review service: ${String(err)}`, null);
  }
  if (!resp.ok) {
    let detail = resp.statusText;
    try {
      const doc = await resp.json();
      if (doc && typeof doc.detail === "string") detail = doc.detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(detail, resp.status);
  }
  return (await resp.json()) as T;
}

export class ReviewApi {
  constructor(private readonly base = "") {}

  getQueue(offset: number, limit: number, objectives?: string[]): Promise<QueuePage> {
    const params = new URLSearchParams({ offset: String(offset), limit: String(limit) });
    if (objectives && objectives.length > 0) {
      params.set("objectives", objectives.join(","));
    }
    return requestJson<QueuePage>(`${this.base}/api/queue?${params}`);
  }

  getItem(unitId: string): Promise<ReviewItemPayload> {
    return requestJson<ReviewItemPayload>(`${this.base}/api/items/${unitId}`);
  }

  putAssessment(
    unitId: string,
    rating: Rating,
    reviewer: string,
    notes = "",
  ): Promise<PutAssessmentResponse> {
    return requestJson<PutAssessmentResponse>(
      `${this.base}/api/items/${unitId}/assessment`,
      {
        method: "PUT",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ rating, reviewer, notes }),
      },
    );
  }

  getSummary(objectives?: string[]): Promise<SummaryPayload> {
    const params = new URLSearchParams();
    if (objectives && objectives.length > 0) {
      params.set("objectives", objectives.join(","));
    }
    const qs = params.toString();
    return requestJson<SummaryPayload>(`${this.base}/api/summary${qs ? "?" + qs : ""}`);
  }
}
