/**
 * Operator panel: sequences the four stages, assembles the session document,
 * submits it, and shows the verdict.  Pure state machine over a ServiceClient;
 * the DOM layer subscribes to `onChange` and renders.
 *
 * A submission that fails for connectivity reasons keeps the document and can
 * be retried; a schema rejection surfaces the service's violation list
 * verbatim so the operator can see exactly what was refused.
 */

import { SchemaRejectedError, ServiceClient, SessionConflictError, type ScreeningResult, type Verdict } from "./api.js";
import { halfErrorBalance, type HalfErrorBalance } from "./balance.js";
import { STAGES, validateSessionDocument, type GameStage, type SessionDocument, type StageLog } from "./wire.js";

export type PanelPhase =
  | "idle"
  | "collecting"
  | "ready"
  | "submitting"
  | "done"
  | "rejected"
  | "offline"
  | "error";

export interface VerdictView {
  verdict: Verdict;
  headline: string;
  detail: string;
  detectorReason: string;
  modelVersion: string;
}

const HEADLINES: Record<Verdict, { headline: string; detail: string }> = {
  typical: {
    headline: "Typical development indicated",
    detail: "No screening flags were raised for this session.",
  },
  at_risk_dysgraphia: {
    headline: "At risk of dysgraphia",
    detail: "Refer for clinical assessment; this screen is not a diagnosis.",
  },
  unsuitable_conditions: {
    headline: "Retest recommended",
    detail: "Test conditions looked unsuitable, so no classification was made.",
  },
};

export function describeVerdict(result: ScreeningResult): VerdictView {
  const text = HEADLINES[result.verdict];
  let detail = text.detail;
  if (result.verdict === "unsuitable_conditions") {
    detail += ` Detector reason: ${result.detector_reason}.`;
  }
  return {
    verdict: result.verdict,
    headline: text.headline,
    detail,
    detectorReason: result.detector_reason,
    modelVersion: result.model_version,
  };
}

export interface PanelOptions {
  /** Pilot deployments show the per-stage error balance to the operator. */
  pilotMode?: boolean;
  /** Result polling schedule; tests shrink these to keep runs fast. */
  pollAttempts?: number;
  pollIntervalMs?: number;
}

export class OperatorPanel {
  readonly client: ServiceClient;
  onChange: (() => void) | null = null;

  private phase: PanelPhase = "idle";
  private sessionId: string | null = null;
  private logs: Map<GameStage, StageLog> = new Map();
  private verdictView: VerdictView | null = null;
  private violations: string[] = [];
  private message = "";
  private balance: HalfErrorBalance | null = null;
  private readonly pilotMode: boolean;
  private readonly pollAttempts: number;
  private readonly pollIntervalMs: number;

  constructor(client: ServiceClient, options: PanelOptions = {}) {
    this.client = client;
    this.pilotMode = options.pilotMode ?? false;
    this.pollAttempts = options.pollAttempts ?? 10;
    this.pollIntervalMs = options.pollIntervalMs ?? 500;
  }

  get state(): PanelPhase {
    return this.phase;
  }

  get currentSessionId(): string | null {
    return this.sessionId;
  }

  get lastVerdict(): VerdictView | null {
    return this.verdictView;
  }

  get lastViolations(): string[] {
    return [...this.violations];
  }

  get lastMessage(): string {
    return this.message;
  }

  get pilotBalance(): HalfErrorBalance | null {
    return this.balance;
  }

  /** Stages still to be played, in order. */
  get remainingStages(): GameStage[] {
    return STAGES.filter((stage) => !this.logs.has(stage));
  }

  /** Begin a fresh session; any previous document is discarded. */
  startSession(sessionId: string = generateSessionId()): string {
    this.sessionId = sessionId;
    this.logs = new Map();
    this.verdictView = null;
    this.violations = [];
    this.message = "";
    this.balance = null;
    this.setPhase("collecting");
    return sessionId;
  }

  /** Store a completed stage log; the panel refuses mismatched sessions. */
  recordStage(log: StageLog): void {
    if (this.sessionId === null) {
      throw new Error("no session in progress");
    }
    if (log.session_id !== this.sessionId) {
      throw new Error("stage log belongs to a different session");
    }
    if (this.logs.has(log.game_stage)) {
      throw new Error(`stage ${log.game_stage} was already recorded`);
    }
    this.logs.set(log.game_stage, log);
    if (this.pilotMode && log.game_stage === "game1" && log.events.length >= 4) {
      this.balance = halfErrorBalance(log.events);
    }
    this.setPhase(this.remainingStages.length === 0 ? "ready" : "collecting");
  }

  /** The assembled document, in fixed stage order. */
  buildDocument(): SessionDocument {
    if (this.sessionId === null) {
      throw new Error("no session in progress");
    }
    const missing = this.remainingStages;
    if (missing.length > 0) {
      throw new Error(`stages not yet played: ${missing.join(", ")}`);
    }
    return {
      schema_version: 1,
      session_id: this.sessionId,
      stages: STAGES.map((stage) => this.logs.get(stage)!),
    };
  }

  /**
   * Submit the session and fetch the verdict.  On connectivity failure the
   * document is retained and `submit` can simply be called again.
   */
  async submit(): Promise<VerdictView | null> {
    const document = this.buildDocument();
    const local = validateSessionDocument(document);
    if (local.length > 0) {
      this.violations = local;
      this.setPhase("rejected");
      return null;
    }
    this.setPhase("submitting");
    try {
      await this.client.ingest(document);
      await this.client.screen(document.session_id);
      const result = await this.pollResult(document.session_id);
      this.verdictView = describeVerdict(result);
      this.setPhase("done");
      return this.verdictView;
    } catch (error) {
      if (error instanceof SchemaRejectedError) {
        this.violations = error.violations;
        this.setPhase("rejected");
      } else if (error instanceof SessionConflictError) {
        this.message = `session id already used: ${error.message}`;
        this.setPhase("error");
      } else {
        // Connectivity or server trouble: keep the document for retry.
        this.message = error instanceof Error ? error.message : String(error);
        this.setPhase("offline");
      }
      return null;
    }
  }

  private async pollResult(sessionId: string): Promise<ScreeningResult> {
    for (let attempt = 0; ; attempt++) {
      const stored = await this.client.result(sessionId);
      if (stored !== null) {
        return stored;
      }
      if (attempt + 1 >= this.pollAttempts) {
        throw new Error(`no result for session ${sessionId} after ${this.pollAttempts} polls`);
      }
      await sleep(this.pollIntervalMs);
    }
  }

  private setPhase(phase: PanelPhase): void {
    this.phase = phase;
    this.onChange?.();
  }
}

export function generateSessionId(): string {
  const stamp = Date.now().toString(36);
  const noise = Math.floor(Math.random() * 0xffffff).toString(36);
  return `s-${stamp}-${noise}`;
}

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}
