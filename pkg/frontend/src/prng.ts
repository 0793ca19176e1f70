/** Small deterministic PRNG so stage scripts can be reproduced from a string seed. */

/** FNV-1a 32-bit hash, used to turn a string seed into a PRNG state. */
export function hashSeed(seed: string): number {
  let h = 0x811c9dc5;
  for (let i = 0; i < seed.length; i++) {
    h ^= seed.charCodeAt(i);
    h = Math.imul(h, 0x01000193);
  }
  return h >>> 0;
}

/** Mulberry32: fast 32-bit generator returning floats in [0, 1). */
export function makeRng(seed: string): () => number {
  let state = hashSeed(seed);
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

/** Uniform integer in [lo, hi] inclusive. */
export function randInt(rng: () => number, lo: number, hi: number): number {
  return lo + Math.floor(rng() * (hi - lo + 1));
}

/** Pick one element of a non-empty array. */
export function choice<T>(rng: () => number, items: readonly T[]): T {
  if (items.length === 0) {
    throw new Error("choice from empty array");
  }
  return items[randInt(rng, 0, items.length - 1)];
}
