/** HTTP client for the screening service. */

import type { SessionDocument } from "./wire.js";

export type Verdict = "typical" | "at_risk_dysgraphia" | "unsuitable_conditions";

export interface ScreeningResult {
  schema_version: number;
  session_id: string;
  verdict: Verdict;
  detector_reason: string;
  model_version: string;
  timestamp: string;
  feature_vector?: number[];
}

export interface HealthStatus {
  status: string;
  model_version: string | null;
  calibration_loaded: boolean;
  sessions_stored: number;
}

/** The service rejected the document; violations are shown to the operator. */
export class SchemaRejectedError extends Error {
  readonly violations: string[];
  constructor(violations: string[]) {
    super(`session rejected: ${violations.join("; ")}`);
    this.violations = violations;
  }
}

/** Same session id resubmitted with different content. */
export class SessionConflictError extends Error {}

/** The service answered with an unexpected status. */
export class ServiceError extends Error {
  readonly status: number;
  constructor(status: number, message: string) {
    super(message);
    this.status = status;
  }
}

export class ServiceClient {
  readonly baseUrl: string;

  constructor(baseUrl: string) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
  }

  /** Submit a completed session document.  Resolves to the session id. */
  async ingest(document: SessionDocument): Promise<string> {
    const response = await fetch(`${this.baseUrl}/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(document),
    });
    if (response.status === 422) {
      const body = (await response.json()) as { violations?: string[] };
      throw new SchemaRejectedError(body.violations ?? ["schema rejected"]);
    }
    if (response.status === 409) {
      throw new SessionConflictError(await errorText(response));
    }
    if (response.status !== 201) {
      throw new ServiceError(response.status, await errorText(response));
    }
    const body = (await response.json()) as { session_id: string };
    return body.session_id;
  }

  /** Run the screening pipeline for an ingested session. */
  async screen(sessionId: string): Promise<ScreeningResult> {
    const response = await fetch(`${this.baseUrl}/sessions/${encodeURIComponent(sessionId)}/screen`, {
      method: "POST",
    });
    if (!response.ok) {
      throw new ServiceError(response.status, await errorText(response));
    }
    return (await response.json()) as ScreeningResult;
  }

  /** Fetch the stored result, or null when none exists yet. */
  async result(sessionId: string): Promise<ScreeningResult | null> {
    const response = await fetch(`${this.baseUrl}/sessions/${encodeURIComponent(sessionId)}/result`);
    if (response.status === 404) {
      return null;
    }
    if (!response.ok) {
      throw new ServiceError(response.status, await errorText(response));
    }
    return (await response.json()) as ScreeningResult;
  }

  async health(): Promise<HealthStatus> {
    const response = await fetch(`${this.baseUrl}/health`);
    if (!response.ok) {
      throw new ServiceError(response.status, await errorText(response));
    }
    return (await response.json()) as HealthStatus;
  }
}

async function errorText(response: Response): Promise<string> {
  try {
    const body = (await response.json()) as { error?: string };
    if (typeof body.error === "string") {
      return body.error;
    }
  } catch {
    // fall through to the generic message
  }
  return `service returned status ${response.status}`;
}
