/** Deployment configuration.  Served as a static config.json next to the bundle. */

import type { GameStage } from "./wire.js";

export interface UiConfig {
  /** Base URL of the screening service, e.g. "http://localhost:8000". */
  serviceUrl: string;
  /** Page count for the same/different game; N pages yield N-1 judgements. */
  game1Frames: number;
  /** Play time per multi-target stage, seconds. */
  stageDurationS: Record<Exclude<GameStage, "game1">, number>;
  /** Number of exit regions drawn around the play field (4..8). */
  regionCount: number;
  /** Seed for the stage scripts, so a deployment replays identically. */
  scriptSeed: string;
  /** Pilot mode shows the within-stage error-balance check to the operator. */
  pilotMode: boolean;
}

export const DEFAULT_CONFIG: UiConfig = {
  serviceUrl: "http://localhost:8000",
  game1Frames: 21,
  stageDurationS: { game2a: 60, game2b: 60, game2c: 60 },
  regionCount: 6,
  scriptSeed: "deploy-default",
  pilotMode: false,
};

/** Merge a partial config (e.g. parsed config.json) over the defaults. */
export function mergeConfig(partial: Partial<UiConfig> | null | undefined): UiConfig {
  if (!partial) {
    return { ...DEFAULT_CONFIG, stageDurationS: { ...DEFAULT_CONFIG.stageDurationS } };
  }
  const merged: UiConfig = {
    ...DEFAULT_CONFIG,
    ...partial,
    stageDurationS: { ...DEFAULT_CONFIG.stageDurationS, ...(partial.stageDurationS ?? {}) },
  };
  if (merged.game1Frames < 2) {
    throw new Error("game1Frames must be at least 2");
  }
  if (merged.regionCount < 4 || merged.regionCount > 8) {
    throw new Error("regionCount must be between 4 and 8");
  }
  for (const stage of ["game2a", "game2b", "game2c"] as const) {
    if (!(merged.stageDurationS[stage] > 0)) {
      throw new Error(`stageDurationS.${stage} must be positive`);
    }
  }
  return merged;
}

/** Load config.json from the bundle directory, falling back to defaults. */
export async function loadConfig(url = "config.json"): Promise<UiConfig> {
  try {
    const response = await fetch(url);
    if (!response.ok) {
      return mergeConfig(null);
    }
    return mergeConfig((await response.json()) as Partial<UiConfig>);
  } catch {
    return mergeConfig(null);
  }
}
