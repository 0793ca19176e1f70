/**
 * Drawing for the two games.
 *
 * Game 1 deliberately uses a single ink colour on a plain page: shape
 * identity is the only cue, with no colour or sound hints that could carry
 * the answer.  Game 2 is a night-sky scene on canvas.
 */

import { positionAt, regionMidpoint, type Game2Script, type Shape } from "./script.js";

const INK = "#1a1a1a";

/** Render one page of the same/different game as an outline SVG shape. */
export function drawGame1Frame(container: HTMLElement, shape: Shape): void {
  const body = shapePath(shape);
  container.innerHTML =
    `<svg viewBox="0 0 100 100" role="img" aria-label="shape">` +
    `<g fill="none" stroke="${INK}" stroke-width="4" stroke-linejoin="round">${body}</g>` +
    `</svg>`;
}

function shapePath(shape: Shape): string {
  switch (shape) {
    case "circle":
      return `<circle cx="50" cy="50" r="32"/>`;
    case "square":
      return `<rect x="20" y="20" width="60" height="60"/>`;
    case "triangle":
      return `<polygon points="50,16 84,78 16,78"/>`;
    case "diamond":
      return `<polygon points="50,14 86,50 50,86 14,50"/>`;
    case "star":
      return `<polygon points="50,12 61,40 90,40 66,58 75,88 50,70 25,88 34,58 10,40 39,40"/>`;
    case "cross":
      return `<path d="M38 16h24v22h22v24H62v22H38V62H16V38h22z"/>`;
  }
}

/** Draw the game 2 scene at stage time t. */
export function drawGame2Scene(
  canvas: HTMLCanvasElement,
  script: Game2Script,
  t: number,
  answered: ReadonlySet<number>,
): void {
  const ctx = canvas.getContext("2d");
  if (ctx === null) {
    return;
  }
  const w = canvas.width;
  const h = canvas.height;
  ctx.fillStyle = "#0b1026";
  ctx.fillRect(0, 0, w, h);

  ctx.strokeStyle = "#39406b";
  ctx.lineWidth = 2;
  ctx.strokeRect(1, 1, w - 2, h - 2);
  for (let r = 0; r < script.regionCount; r++) {
    const mid = regionMidpoint(r, script.regionCount);
    ctx.fillStyle = "#9aa3d0";
    ctx.font = "16px sans-serif";
    ctx.textAlign = "center";
    ctx.textBaseline = "middle";
    const pad = 14;
    const x = pad + mid.x * (w - 2 * pad);
    const y = pad + mid.y * (h - 2 * pad);
    ctx.fillText(String(r + 1), x, y);
  }

  for (const object of script.distractors) {
    const p = positionAt(object, t);
    ctx.fillStyle = object.id.includes("decoy") ? "#c9a84c" : "#e8ecff";
    const radius = object.id.includes("decoy") ? 5 : 1.7;
    ctx.beginPath();
    ctx.arc(p.x * w, p.y * h, radius, 0, Math.PI * 2);
    ctx.fill();
  }

  script.targets.forEach((target, index) => {
    if (t > target.exitTime || answered.has(index)) {
      return;
    }
    const p = positionAt(target, t);
    const tail = positionAt(target, Math.max(0, t - 0.4));
    ctx.strokeStyle = "#7fd4ff";
    ctx.lineWidth = 3;
    ctx.beginPath();
    ctx.moveTo(tail.x * w, tail.y * h);
    ctx.lineTo(p.x * w, p.y * h);
    ctx.stroke();
    ctx.fillStyle = "#d2f0ff";
    ctx.beginPath();
    ctx.arc(p.x * w, p.y * h, 7, 0, Math.PI * 2);
    ctx.fill();
  });
}
