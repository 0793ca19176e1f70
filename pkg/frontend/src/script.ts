/**
 * Stage scripts: the deterministic content each game plays out.
 *
 * Scripts are generated up front from a seed so a stage can be replayed
 * exactly — in the browser, in tests, and in headless scripted runs.  The
 * stage state machines consume scripts; the renderer only draws them.
 */

import { choice, makeRng, randInt } from "./prng.js";
import type { GameStage } from "./wire.js";

// ---------------------------------------------------------------- game 1 ----

/** Monochrome outline shapes; identity is the only cue, never colour. */
export const SHAPES = ["circle", "square", "triangle", "diamond", "star", "cross"] as const;
export type Shape = typeof SHAPES[number];

export type Judgement = "same" | "different";

export interface Game1Script {
  frames: Shape[];
}

/**
 * Build a page sequence for the same/different game.  Each page after the
 * first is the previous shape with probability one half, otherwise a
 * different one, so both answers stay in play.
 */
export function makeGame1Script(frameCount: number, seed: string): Game1Script {
  if (frameCount < 2) {
    throw new Error("game1 needs at least 2 frames");
  }
  const rng = makeRng(`${seed}:game1`);
  const frames: Shape[] = [choice(rng, SHAPES)];
  for (let i = 1; i < frameCount; i++) {
    const prev = frames[i - 1];
    if (rng() < 0.5) {
      frames.push(prev);
    } else {
      frames.push(choice(rng, SHAPES.filter((s) => s !== prev)));
    }
  }
  return { frames };
}

/** Correct answer for page `index` (1-based against its predecessor). */
export function game1Truth(script: Game1Script, index: number): Judgement {
  if (index < 1 || index >= script.frames.length) {
    throw new Error(`no judgement for frame ${index}`);
  }
  return script.frames[index] === script.frames[index - 1] ? "same" : "different";
}

export function validateGame1Script(script: Game1Script): string[] {
  const problems: string[] = [];
  if (script.frames.length < 2) {
    problems.push("needs at least 2 frames");
  }
  script.frames.forEach((shape, i) => {
    if (!(SHAPES as readonly string[]).includes(shape)) {
      problems.push(`frames[${i}]: unknown shape '${shape}'`);
    }
  });
  return problems;
}

// ---------------------------------------------------------------- game 2 ----

export interface Waypoint {
  t: number;
  x: number;
  y: number;
}

/** A scripted moving object; only targets exit the field and get scored. */
export interface MovingObject {
  id: string;
  /** Piecewise-linear path in unit field coordinates, waypoints by time. */
  path: Waypoint[];
}

export interface TargetScript extends MovingObject {
  /** When the object finishes leaving the field, seconds from stage start. */
  exitTime: number;
  /** Which edge region it leaves through (0..regionCount-1). */
  exitRegion: number;
}

export interface Game2Script {
  stage: Exclude<GameStage, "game1">;
  durationS: number;
  regionCount: number;
  /** Targets in exit order; exit times strictly ascending. */
  targets: TargetScript[];
  /** Non-exiting scenery and decoys; never scored. */
  distractors: MovingObject[];
}

/** Targets per stage: difficulty steps up one target at a time. */
export const TARGETS_PER_STAGE: Record<Exclude<GameStage, "game1">, number> = {
  game2a: 1,
  game2b: 2,
  game2c: 3,
};

/**
 * Point on the unit-square perimeter at fraction f in [0, 1), walking
 * clockwise from the top-left corner.
 */
export function perimeterPoint(f: number): { x: number; y: number } {
  const d = ((f % 1) + 1) % 1 * 4;
  if (d < 1) return { x: d, y: 0 };
  if (d < 2) return { x: 1, y: d - 1 };
  if (d < 3) return { x: 3 - d, y: 1 };
  return { x: 0, y: 4 - d };
}

/** Midpoint of exit region `region` on the field boundary. */
export function regionMidpoint(region: number, regionCount: number): { x: number; y: number } {
  return perimeterPoint((region + 0.5) / regionCount);
}

export interface Game2Options {
  durationS: number;
  regionCount: number;
  targetCount?: number;
}

/**
 * Build a multi-target stage script.  Targets are spaced across the stage so
 * exit times are strictly ascending and strictly inside the stage window;
 * each drifts through the field and leaves through its region's midpoint.
 */
export function makeGame2Script(
  stage: Exclude<GameStage, "game1">,
  options: Game2Options,
  seed: string,
): Game2Script {
  const { durationS, regionCount } = options;
  if (durationS <= 0) {
    throw new Error("stage duration must be positive");
  }
  if (regionCount < 4 || regionCount > 8) {
    throw new Error("regionCount must be between 4 and 8");
  }
  const targetCount = options.targetCount ?? TARGETS_PER_STAGE[stage];
  if (targetCount < 1) {
    throw new Error("need at least one target");
  }
  const rng = makeRng(`${seed}:${stage}`);
  const slot = durationS / (targetCount + 1);
  const targets: TargetScript[] = [];
  let lastRegion = -1;
  for (let i = 0; i < targetCount; i++) {
    // Jitter stays under half a slot so exit order cannot flip.
    const exitTime = slot * (i + 1) + (rng() - 0.5) * slot * 0.5;
    let region = randInt(rng, 0, regionCount - 1);
    if (region === lastRegion) {
      region = (region + 1 + randInt(rng, 0, regionCount - 2)) % regionCount;
    }
    lastRegion = region;
    const exitPoint = regionMidpoint(region, regionCount);
    const travel = 3 + rng() * 2;
    const spawn = Math.max(0, exitTime - travel);
    const path: Waypoint[] = [
      { t: spawn, x: 0.25 + rng() * 0.5, y: 0.25 + rng() * 0.5 },
      {
        t: spawn + (exitTime - spawn) * 0.6,
        x: 0.2 + rng() * 0.6,
        y: 0.2 + rng() * 0.6,
      },
      { t: exitTime, x: exitPoint.x, y: exitPoint.y },
    ];
    targets.push({ id: `${stage}-target-${i}`, path, exitTime, exitRegion: region });
  }
  const distractors: MovingObject[] = [];
  // Fixed stars everywhere; drifting stars from game2b up; decoy comets that
  // loop back inside the field (never exiting) on game2c.
  const starCount = stage === "game2a" ? 12 : 16;
  for (let i = 0; i < starCount; i++) {
    const x = rng();
    const y = rng();
    const drift = stage === "game2a" ? 0 : 0.08;
    distractors.push({
      id: `${stage}-star-${i}`,
      path: [
        { t: 0, x, y },
        { t: durationS, x: clamp01(x + (rng() - 0.5) * drift * 2), y: clamp01(y + (rng() - 0.5) * drift * 2) },
      ],
    });
  }
  if (stage === "game2c") {
    for (let i = 0; i < 2; i++) {
      const cx = 0.3 + rng() * 0.4;
      const cy = 0.3 + rng() * 0.4;
      distractors.push({
        id: `${stage}-decoy-${i}`,
        path: [
          { t: 0, x: cx, y: cy },
          { t: durationS * 0.33, x: clamp01(cx + 0.25), y: cy },
          { t: durationS * 0.66, x: cx, y: clamp01(cy + 0.25) },
          { t: durationS, x: cx, y: cy },
        ],
      });
    }
  }
  const script: Game2Script = { stage, durationS, regionCount, targets, distractors };
  const problems = validateGame2Script(script);
  if (problems.length > 0) {
    throw new Error(`generated an invalid script: ${problems.join("; ")}`);
  }
  return script;
}

export function validateGame2Script(script: Game2Script): string[] {
  const problems: string[] = [];
  if (script.durationS <= 0) {
    problems.push("duration must be positive");
  }
  if (script.regionCount < 4 || script.regionCount > 8) {
    problems.push("regionCount must be between 4 and 8");
  }
  if (script.targets.length === 0) {
    problems.push("needs at least one target");
  }
  let prevExit = 0;
  script.targets.forEach((target, i) => {
    if (!(target.exitTime > 0 && target.exitTime < script.durationS)) {
      problems.push(`targets[${i}]: exitTime must lie strictly inside the stage`);
    }
    if (target.exitTime <= prevExit) {
      problems.push(`targets[${i}]: exit times must be strictly ascending`);
    }
    prevExit = target.exitTime;
    if (target.exitRegion < 0 || target.exitRegion >= script.regionCount) {
      problems.push(`targets[${i}]: exitRegion out of range`);
    }
    if (target.path.length < 2) {
      problems.push(`targets[${i}]: path needs at least 2 waypoints`);
    }
    for (let k = 1; k < target.path.length; k++) {
      if (target.path[k].t <= target.path[k - 1].t) {
        problems.push(`targets[${i}]: path times must be strictly ascending`);
        break;
      }
    }
    const last = target.path[target.path.length - 1];
    if (last && Math.abs(last.t - target.exitTime) > 1e-9) {
      problems.push(`targets[${i}]: path must end at exitTime`);
    }
  });
  return problems;
}

/** Interpolate an object's position at time t (clamped to its path ends). */
export function positionAt(object: MovingObject, t: number): { x: number; y: number } {
  const path = object.path;
  if (t <= path[0].t) {
    return { x: path[0].x, y: path[0].y };
  }
  for (let i = 1; i < path.length; i++) {
    if (t <= path[i].t) {
      const a = path[i - 1];
      const b = path[i];
      const f = (t - a.t) / (b.t - a.t);
      return { x: a.x + (b.x - a.x) * f, y: a.y + (b.y - a.y) * f };
    }
  }
  const end = path[path.length - 1];
  return { x: end.x, y: end.y };
}

function clamp01(v: number): number {
  return Math.min(1, Math.max(0, v));
}
