/**
 * Multi-target tracking stages: comets cross the field and leave through an
 * edge region; the child indicates the exit region.  A choice made at time t
 * is scored against the target whose exit window covers t — the first target
 * (in exit order) that has not yet left the field, up to and including its
 * exit moment.  Once the last target is gone further input does nothing.
 *
 * The log keeps only raw reactions plus the scripted exit times; targets the
 * child never reacted to are filled in server-side as misses.
 */

import type { Game2Script, TargetScript } from "./script.js";
import { IncompleteStageError } from "./game1.js";
import { quantizeMs, SCHEMA_VERSION, type ResponseEvent, type StageLog } from "./wire.js";

export class Game2Stage {
  readonly script: Game2Script;
  readonly sessionId: string;
  private events: ResponseEvent[] = [];
  private answered: Set<number> = new Set();
  private finished = false;
  private abandoned = false;

  constructor(script: Game2Script, sessionId: string) {
    this.script = script;
    this.sessionId = sessionId;
  }

  get isComplete(): boolean {
    return this.finished && !this.abandoned;
  }

  get isAbandoned(): boolean {
    return this.abandoned;
  }

  get reactionCount(): number {
    return this.events.length;
  }

  /** Indices of targets the child has already answered (for rendering). */
  get answeredTargets(): ReadonlySet<number> {
    return this.answered;
  }

  /** The target whose exit window covers stage time t, if any. */
  activeTarget(t: number): { index: number; target: TargetScript } | null {
    if (t <= 0) {
      return null;
    }
    for (let i = 0; i < this.script.targets.length; i++) {
      if (t <= this.script.targets[i].exitTime) {
        return { index: i, target: this.script.targets[i] };
      }
    }
    return null;
  }

  /**
   * Record the child's exit-region choice at stage time `tSeconds`.
   * Returns whether it was correct, or null when the input is ignored
   * (stage over, no target in play, or that target already answered).
   */
  chooseRegion(region: number, tSeconds: number): boolean | null {
    if (this.abandoned || this.finished) {
      return null;
    }
    if (region < 0 || region >= this.script.regionCount) {
      return null;
    }
    const active = this.activeTarget(tSeconds);
    if (active === null || this.answered.has(active.index)) {
      return null;
    }
    const correct = region === active.target.exitRegion;
    this.pushEvent(tSeconds, correct);
    this.answered.add(active.index);
    return correct;
  }

  /** Close the stage at its scripted end; only finished runs produce a log. */
  finish(): void {
    if (!this.abandoned) {
      this.finished = true;
    }
  }

  abandon(): void {
    if (!this.finished) {
      this.abandoned = true;
    }
  }

  toStageLog(): StageLog {
    if (!this.isComplete) {
      throw new IncompleteStageError(`${this.script.stage} run is incomplete and cannot be submitted`);
    }
    return {
      schema_version: SCHEMA_VERSION,
      session_id: this.sessionId,
      game_stage: this.script.stage,
      events: this.events.map((e) => ({ ...e })),
      target_exit_times: this.script.targets.map((target) => quantizeMs(target.exitTime)),
    };
  }

  private pushEvent(tSeconds: number, correct: boolean): void {
    let t = quantizeMs(tSeconds);
    const prev = this.events[this.events.length - 1];
    if (prev !== undefined && t <= prev.t) {
      t = quantizeMs(prev.t + 0.001);
    }
    if (t < 0) {
      throw new Error("stage clock went negative");
    }
    this.events.push({ t, correct });
  }
}
