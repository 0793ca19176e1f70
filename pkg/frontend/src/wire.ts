/**
 * Wire format shared with the screening service.
 *
 * A stage log carries only gameplay telemetry: timestamps and correctness,
 * plus target exit times for the multi-target stages.  The field lists below
 * are closed on purpose — anything else (names, notes, free text) must never
 * ride along, and the service rejects documents containing unknown fields.
 */

export const STAGES = ["game1", "game2a", "game2b", "game2c"] as const;
export type GameStage = typeof STAGES[number];

export const SCHEMA_VERSION = 1;

export interface ResponseEvent {
  /** Seconds since stage start, millisecond resolution. */
  t: number;
  correct: boolean;
}

export interface StageLog {
  schema_version: number;
  session_id: string;
  game_stage: GameStage;
  events: ResponseEvent[];
  /** Present on game2 stages only: when each target left the play field. */
  target_exit_times?: number[];
}

export interface SessionDocument {
  schema_version: number;
  session_id: string;
  stages: StageLog[];
}

const STAGE_LOG_FIELDS = new Set([
  "schema_version",
  "session_id",
  "game_stage",
  "events",
  "target_exit_times",
]);
const EVENT_FIELDS = new Set(["t", "correct"]);
const SESSION_DOC_FIELDS = new Set(["schema_version", "session_id", "stages"]);

function isPlainObject(value: unknown): value is Record<string, unknown> {
  return typeof value === "object" && value !== null && !Array.isArray(value);
}

/**
 * Pre-flight check of a stage log against the service schema.  Returns a list
 * of violations (empty means valid).  The service performs the same checks on
 * ingest; running them locally lets the panel catch problems before anything
 * leaves the device.
 */
export function validateStageLog(value: unknown): string[] {
  const problems: string[] = [];
  if (!isPlainObject(value)) {
    return ["stage log must be an object"];
  }
  for (const key of Object.keys(value)) {
    if (!STAGE_LOG_FIELDS.has(key)) {
      problems.push(`unknown field '${key}'`);
    }
  }
  if (value.schema_version !== SCHEMA_VERSION) {
    problems.push(`schema_version must be ${SCHEMA_VERSION}`);
  }
  if (typeof value.session_id !== "string" || value.session_id === "") {
    problems.push("session_id must be a non-empty string");
  }
  const stage = value.game_stage;
  const stageKnown = typeof stage === "string" && (STAGES as readonly string[]).includes(stage);
  if (!stageKnown) {
    problems.push(`game_stage must be one of ${STAGES.join(", ")}`);
  }
  const events = value.events;
  if (!Array.isArray(events)) {
    problems.push("events must be an array");
  } else {
    let prev = -Infinity;
    events.forEach((event, i) => {
      if (!isPlainObject(event)) {
        problems.push(`events[${i}] must be an object`);
        return;
      }
      for (const key of Object.keys(event)) {
        if (!EVENT_FIELDS.has(key)) {
          problems.push(`events[${i}]: unknown field '${key}'`);
        }
      }
      const t = event.t;
      if (typeof t !== "number" || !Number.isFinite(t) || t < 0) {
        problems.push(`events[${i}].t must be a finite non-negative number`);
      } else {
        if (t <= prev) {
          problems.push(`events[${i}].t must be strictly greater than the previous event`);
        }
        prev = t;
      }
      if (typeof event.correct !== "boolean") {
        problems.push(`events[${i}].correct must be a boolean`);
      }
    });
  }
  const exits = value.target_exit_times;
  if (stage === "game1") {
    if (exits !== undefined) {
      problems.push("game1 logs must not carry target_exit_times");
    }
  } else if (stageKnown) {
    if (!Array.isArray(exits) || exits.length === 0) {
      problems.push("multi-target stages require a non-empty target_exit_times array");
    } else {
      let prev = 0;
      exits.forEach((exit, i) => {
        if (typeof exit !== "number" || !Number.isFinite(exit) || exit <= 0) {
          problems.push(`target_exit_times[${i}] must be a positive finite number`);
        } else {
          if (exit <= prev) {
            problems.push(`target_exit_times[${i}] must be strictly ascending`);
          }
          prev = exit;
        }
      });
    }
  }
  if (Array.isArray(events) && events.length === 0 && !Array.isArray(exits)) {
    problems.push("empty record: no events and no target exit times");
  }
  return problems;
}

/** Pre-flight check of a full session document: all four stages, exactly once. */
export function validateSessionDocument(value: unknown): string[] {
  const problems: string[] = [];
  if (!isPlainObject(value)) {
    return ["session document must be an object"];
  }
  for (const key of Object.keys(value)) {
    if (!SESSION_DOC_FIELDS.has(key)) {
      problems.push(`unknown field '${key}'`);
    }
  }
  if (value.schema_version !== SCHEMA_VERSION) {
    problems.push(`schema_version must be ${SCHEMA_VERSION}`);
  }
  const sessionId = value.session_id;
  if (typeof sessionId !== "string" || sessionId === "") {
    problems.push("session_id must be a non-empty string");
  }
  const stages = value.stages;
  if (!Array.isArray(stages)) {
    problems.push("stages must be an array");
    return problems;
  }
  const seen: string[] = [];
  stages.forEach((log, i) => {
    const nested = validateStageLog(log);
    problems.push(...nested.map((p) => `stages[${i}]: ${p}`));
    if (isPlainObject(log)) {
      if (typeof log.game_stage === "string") {
        seen.push(log.game_stage);
      }
      if (typeof sessionId === "string" && log.session_id !== sessionId) {
        problems.push(`stages[${i}]: session_id does not match the document`);
      }
    }
  });
  for (const stage of STAGES) {
    const count = seen.filter((s) => s === stage).length;
    if (count === 0) {
      problems.push(`missing stage ${stage}`);
    } else if (count > 1) {
      problems.push(`duplicate stage ${stage}`);
    }
  }
  return problems;
}

/** Round a timestamp to millisecond resolution, the wire format's precision. */
export function quantizeMs(seconds: number): number {
  return Math.round(seconds * 1000) / 1000;
}
