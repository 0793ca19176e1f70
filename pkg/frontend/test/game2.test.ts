import { describe, expect, it } from "vitest";

import { Game2Stage } from "../src/game2.js";
import { IncompleteStageError } from "../src/game1.js";
import type { Game2Script } from "../src/script.js";
import { validateStageLog } from "../src/wire.js";

function singleTargetScript(exitTime = 6.5): Game2Script {
  return {
    stage: "game2a",
    durationS: 12,
    regionCount: 6,
    targets: [
      {
        id: "t0",
        path: [
          { t: 2, x: 0.5, y: 0.5 },
          { t: exitTime, x: 1, y: 0.25 },
        ],
        exitTime,
        exitRegion: 1,
      },
    ],
    distractors: [],
  };
}

function twoTargetScript(): Game2Script {
  return {
    stage: "game2b",
    durationS: 12,
    regionCount: 6,
    targets: [
      {
        id: "t0",
        path: [
          { t: 1, x: 0.5, y: 0.5 },
          { t: 5, x: 1, y: 0.25 },
        ],
        exitTime: 5.0,
        exitRegion: 1,
      },
      {
        id: "t1",
        path: [
          { t: 5, x: 0.5, y: 0.5 },
          { t: 9, x: 0.5, y: 1 },
        ],
        exitTime: 9.0,
        exitRegion: 3,
      },
    ],
    distractors: [],
  };
}

describe("Game2Stage", () => {
  it("scores a choice against the target whose window covers it", () => {
    const stage = new Game2Stage(singleTargetScript(), "s-one");
    expect(stage.chooseRegion(1, 6.1)).toBe(true);
    stage.finish();
    const log = stage.toStageLog();
    expect(log.events).toEqual([{ t: 6.1, correct: true }]);
    expect(log.target_exit_times).toEqual([6.5]);
    expect(validateStageLog(log)).toEqual([]);
  });

  it("scores a wrong region as incorrect", () => {
    const stage = new Game2Stage(singleTargetScript(), "s-wrong");
    expect(stage.chooseRegion(4, 6.1)).toBe(false);
    stage.finish();
    expect(stage.toStageLog().events).toEqual([{ t: 6.1, correct: false }]);
  });

  it("emits an empty event list when the child never reacts", () => {
    const stage = new Game2Stage(twoTargetScript(), "s-silent");
    stage.finish();
    const log = stage.toStageLog();
    expect(log.events).toEqual([]);
    expect(log.target_exit_times).toEqual([5.0, 9.0]);
    expect(validateStageLog(log)).toEqual([]);
  });

  it("keeps only raw reactions; unanswered targets leave no event", () => {
    const script = twoTargetScript();
    const stage = new Game2Stage(script, "s-first-only");
    expect(stage.chooseRegion(1, 4.8)).toBe(true);
    stage.finish();
    const log = stage.toStageLog();
    expect(log.events).toEqual([{ t: 4.8, correct: true }]);
    expect(log.target_exit_times).toEqual([5.0, 9.0]);
  });

  it("assigns a window its full half-open interval", () => {
    const script = twoTargetScript();
    // Exactly at the first exit: still the first target's window.
    const atExit = new Game2Stage(script, "s-edge-a");
    expect(atExit.chooseRegion(1, 5.0)).toBe(true);
    // Just past it: the second target's window, scored against region 3.
    const pastExit = new Game2Stage(script, "s-edge-b");
    expect(pastExit.chooseRegion(1, 5.01)).toBe(false);
    expect(pastExit.chooseRegion(3, 8.0)).toBeNull(); // window already answered
  });

  it("accepts at most one choice per target window", () => {
    const stage = new Game2Stage(twoTargetScript(), "s-once");
    expect(stage.chooseRegion(2, 3.0)).toBe(false);
    expect(stage.chooseRegion(1, 4.0)).toBeNull();
    expect(stage.reactionCount).toBe(1);
  });

  it("ignores input outside any window", () => {
    const stage = new Game2Stage(twoTargetScript(), "s-outside");
    expect(stage.chooseRegion(1, 0)).toBeNull();
    expect(stage.chooseRegion(1, 9.5)).toBeNull();
    expect(stage.chooseRegion(99, 3.0)).toBeNull();
    expect(stage.chooseRegion(-1, 3.0)).toBeNull();
    expect(stage.reactionCount).toBe(0);
  });

  it("quantizes exit times and reaction times to milliseconds", () => {
    const script = singleTargetScript(6.5004);
    const stage = new Game2Stage(script, "s-quant");
    stage.chooseRegion(1, 4.12345);
    stage.finish();
    const log = stage.toStageLog();
    expect(log.events[0].t).toBe(4.123);
    expect(log.target_exit_times).toEqual([6.5]);
  });

  it("refuses a log before the stage is finished", () => {
    const stage = new Game2Stage(singleTargetScript(), "s-early");
    expect(() => stage.toStageLog()).toThrow(IncompleteStageError);
  });

  it("never submits an abandoned run", () => {
    const stage = new Game2Stage(singleTargetScript(), "s-gone");
    stage.chooseRegion(1, 3.0);
    stage.abandon();
    stage.finish();
    expect(stage.isComplete).toBe(false);
    expect(stage.chooseRegion(1, 6.0)).toBeNull();
    expect(() => stage.toStageLog()).toThrow(IncompleteStageError);
  });
});
