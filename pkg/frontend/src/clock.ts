/** Stage clocks: seconds since stage start, monotonic, millisecond precision. */

export interface StageClock {
  /** Seconds elapsed since the stage began. */
  now(): number;
}

/** Browser clock anchored to performance.now() at stage start. */
export class PerformanceClock implements StageClock {
  private readonly startMs: number;

  constructor() {
    this.startMs = performance.now();
  }

  now(): number {
    return (performance.now() - this.startMs) / 1000;
  }
}

/** Hand-driven clock for tests and scripted playthroughs. */
export class ManualClock implements StageClock {
  private t = 0;

  now(): number {
    return this.t;
  }

  set(seconds: number): void {
    if (seconds < this.t) {
      throw new Error("manual clock cannot go backwards");
    }
    this.t = seconds;
  }

  advance(seconds: number): void {
    this.set(this.t + seconds);
  }
}
