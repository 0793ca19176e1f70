/**
 * Same/different game: one shape per page, the child says whether it matches
 * the page before.  Pure state machine — timestamps come in from the caller
 * (the browser shell passes stage-clock readings, tests pass literals).
 */

import { game1Truth, type Game1Script, type Judgement } from "./script.js";
import { quantizeMs, SCHEMA_VERSION, type ResponseEvent, type StageLog } from "./wire.js";

export class IncompleteStageError extends Error {}

/** ArrowLeft means "same", ArrowRight means "different" — fixed mapping. */
export const KEY_BINDINGS: Record<string, Judgement> = {
  ArrowLeft: "same",
  ArrowRight: "different",
};

export class Game1Stage {
  readonly script: Game1Script;
  readonly sessionId: string;
  private events: ResponseEvent[] = [];
  private frameIndex = 1;
  private abandoned = false;

  constructor(script: Game1Script, sessionId: string) {
    this.script = script;
    this.sessionId = sessionId;
  }

  /** Index of the page currently shown (0-based). */
  get currentFrame(): number {
    return Math.min(this.frameIndex, this.script.frames.length - 1);
  }

  /** True once every page after the first has been judged. */
  get isComplete(): boolean {
    return !this.abandoned && this.frameIndex >= this.script.frames.length;
  }

  get isAbandoned(): boolean {
    return this.abandoned;
  }

  get judgedCount(): number {
    return this.events.length;
  }

  /**
   * Record the child's judgement of the current page at stage time
   * `tSeconds`.  Advances to the next page; returns whether the judgement
   * was correct, or null if the stage is already over.
   */
  choose(judgement: Judgement, tSeconds: number): boolean | null {
    if (this.abandoned || this.isComplete) {
      return null;
    }
    const correct = judgement === game1Truth(this.script, this.frameIndex);
    this.pushEvent(tSeconds, correct);
    this.frameIndex += 1;
    return correct;
  }

  /** Mark the run abandoned (navigation away, window defocus, give-up). */
  abandon(): void {
    if (!this.isComplete) {
      this.abandoned = true;
    }
  }

  /**
   * The stage log for a completed run.  Abandoned or unfinished runs have no
   * log — partial data is never submitted.
   */
  toStageLog(): StageLog {
    if (!this.isComplete) {
      throw new IncompleteStageError("game1 run is incomplete and cannot be submitted");
    }
    return {
      schema_version: SCHEMA_VERSION,
      session_id: this.sessionId,
      game_stage: "game1",
      events: this.events.map((e) => ({ ...e })),
    };
  }

  private pushEvent(tSeconds: number, correct: boolean): void {
    let t = quantizeMs(tSeconds);
    const prev = this.events[this.events.length - 1];
    if (prev !== undefined && t <= prev.t) {
      // Millisecond resolution can collapse two near-simultaneous key
      // presses; nudge forward so timestamps stay strictly ascending.
      t = quantizeMs(prev.t + 0.001);
    }
    if (t < 0) {
      throw new Error("stage clock went negative");
    }
    this.events.push({ t, correct });
  }
}
