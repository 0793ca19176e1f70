/**
 * Pilot-mode quality check: compare error rates between the two halves of a
 * stage to spot fatigue or warm-up drift before a deployment goes live.
 * Mirrors the service-side computation so both screens agree.
 */

import type { ResponseEvent } from "./wire.js";

/** Two-sided 5% critical value of the standard normal. */
const Z_TWO_SIDED_05 = 1.959963984540054;

export interface HalfErrorBalance {
  firstHalfErrorRate: number;
  secondHalfErrorRate: number;
  z: number;
  significant: boolean;
}

export function halfErrorBalance(events: readonly ResponseEvent[]): HalfErrorBalance {
  const n = events.length;
  if (n < 4) {
    throw new Error(`need at least 4 events to compare halves, got ${n}`);
  }
  const cut = Math.floor((n + 1) / 2);
  const halves = [events.slice(0, cut), events.slice(cut)];
  const errors = halves.map((half) => half.filter((e) => !e.correct).length);
  const sizes = halves.map((half) => half.length);
  const rates = [errors[0] / sizes[0], errors[1] / sizes[1]];
  const pooled = (errors[0] + errors[1]) / n;
  let z = 0;
  if (pooled !== 0 && pooled !== 1) {
    const se = Math.sqrt(pooled * (1 - pooled) * (1 / sizes[0] + 1 / sizes[1]));
    z = (rates[0] - rates[1]) / se;
  }
  return {
    firstHalfErrorRate: rates[0],
    secondHalfErrorRate: rates[1],
    z,
    significant: Math.abs(z) > Z_TWO_SIDED_05,
  };
}
