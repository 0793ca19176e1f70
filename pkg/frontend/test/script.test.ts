import { describe, expect, it } from "vitest";

import {
  game1Truth,
  makeGame1Script,
  makeGame2Script,
  perimeterPoint,
  positionAt,
  validateGame1Script,
  validateGame2Script,
} from "../src/script.js";

describe("makeGame1Script", () => {
  it("is deterministic in the seed", () => {
    const a = makeGame1Script(21, "alpha");
    const b = makeGame1Script(21, "alpha");
    const c = makeGame1Script(21, "beta");
    expect(a.frames).toEqual(b.frames);
    expect(a.frames).not.toEqual(c.frames);
  });

  it("keeps both answers in play over a long run", () => {
    const script = makeGame1Script(80, "mixing");
    let same = 0;
    for (let i = 1; i < script.frames.length; i++) {
      if (game1Truth(script, i) === "same") {
        same += 1;
      }
    }
    expect(same).toBeGreaterThan(10);
    expect(same).toBeLessThan(69);
  });

  it("validates its own output", () => {
    expect(validateGame1Script(makeGame1Script(21, "x"))).toEqual([]);
  });

  it("refuses fewer than two frames", () => {
    expect(() => makeGame1Script(1, "x")).toThrow();
  });
});

describe("makeGame2Script", () => {
  const options = { durationS: 60, regionCount: 6 };

  it("is deterministic in the seed", () => {
    const a = makeGame2Script("game2c", options, "alpha");
    const b = makeGame2Script("game2c", options, "alpha");
    expect(a).toEqual(b);
  });

  it("steps target count up by stage", () => {
    expect(makeGame2Script("game2a", options, "s").targets).toHaveLength(1);
    expect(makeGame2Script("game2b", options, "s").targets).toHaveLength(2);
    expect(makeGame2Script("game2c", options, "s").targets).toHaveLength(3);
  });

  it("keeps exit times strictly ascending and inside the stage", () => {
    for (let i = 0; i < 25; i++) {
      const script = makeGame2Script("game2c", options, `seed-${i}`);
      let prev = 0;
      for (const target of script.targets) {
        expect(target.exitTime).toBeGreaterThan(prev);
        expect(target.exitTime).toBeLessThan(script.durationS);
        prev = target.exitTime;
      }
      expect(validateGame2Script(script)).toEqual([]);
    }
  });

  it("ends every target path on its exit region midpoint", () => {
    const script = makeGame2Script("game2b", options, "paths");
    for (const target of script.targets) {
      const end = positionAt(target, target.exitTime);
      const onEdge =
        end.x === 0 || end.x === 1 || end.y === 0 || end.y === 1;
      expect(onEdge).toBe(true);
    }
  });

  it("rejects out-of-range region counts", () => {
    expect(() => makeGame2Script("game2a", { durationS: 60, regionCount: 3 }, "s")).toThrow();
    expect(() => makeGame2Script("game2a", { durationS: 60, regionCount: 9 }, "s")).toThrow();
  });
});

describe("perimeterPoint", () => {
  it("walks the square clockwise from the top-left", () => {
    expect(perimeterPoint(0)).toEqual({ x: 0, y: 0 });
    expect(perimeterPoint(0.25)).toEqual({ x: 1, y: 0 });
    expect(perimeterPoint(0.5)).toEqual({ x: 1, y: 1 });
    expect(perimeterPoint(0.75)).toEqual({ x: 0, y: 1 });
    expect(perimeterPoint(0.125)).toEqual({ x: 0.5, y: 0 });
  });
});

describe("positionAt", () => {
  const object = {
    id: "probe",
    path: [
      { t: 2, x: 0, y: 0 },
      { t: 4, x: 1, y: 0.5 },
    ],
  };

  it("clamps before the first waypoint", () => {
    expect(positionAt(object, 0)).toEqual({ x: 0, y: 0 });
  });

  it("interpolates linearly between waypoints", () => {
    expect(positionAt(object, 3)).toEqual({ x: 0.5, y: 0.25 });
  });

  it("clamps after the last waypoint", () => {
    expect(positionAt(object, 99)).toEqual({ x: 1, y: 0.5 });
  });
});
