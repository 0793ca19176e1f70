/** Browser entry point: wires the games and the operator panel to the DOM. */

import { ServiceClient } from "./api.js";
import { PerformanceClock } from "./clock.js";
import { loadConfig, type UiConfig } from "./config.js";
import { Game1Stage, KEY_BINDINGS } from "./game1.js";
import { Game2Stage } from "./game2.js";
import { OperatorPanel } from "./panel.js";
import { drawGame1Frame, drawGame2Scene } from "./render.js";
import { makeGame1Script, makeGame2Script } from "./script.js";
import { STAGES, type GameStage } from "./wire.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

class App {
  private readonly config: UiConfig;
  private readonly panel: OperatorPanel;
  private cleanupStage: (() => void) | null = null;

  constructor(config: UiConfig) {
    this.config = config;
    this.panel = new OperatorPanel(new ServiceClient(config.serviceUrl), {
      pilotMode: config.pilotMode,
    });
    this.panel.onChange = () => this.renderPanel();

    el<HTMLButtonElement>("start").addEventListener("click", () => {
      this.panel.startSession();
      this.playNextStage();
    });
    el<HTMLButtonElement>("submit").addEventListener("click", () => {
      void this.panel.submit();
    });
    el<HTMLButtonElement>("retry").addEventListener("click", () => {
      void this.panel.submit();
    });
    this.renderPanel();
  }

  private playNextStage(): void {
    this.cleanupStage?.();
    this.cleanupStage = null;
    const next = this.panel.remainingStages[0];
    if (next === undefined) {
      this.renderPanel();
      return;
    }
    if (next === "game1") {
      this.playGame1();
    } else {
      this.playGame2(next);
    }
  }

  private playGame1(): void {
    const sessionId = this.panel.currentSessionId!;
    const script = makeGame1Script(this.config.game1Frames, `${this.config.scriptSeed}:${sessionId}`);
    const stage = new Game1Stage(script, sessionId);
    const clock = new PerformanceClock();
    const frameBox = el<HTMLDivElement>("frame");
    el<HTMLDivElement>("stage-title").textContent =
      "Does this shape match the one before? Left arrow: same. Right arrow: different.";
    this.showArea("game1");
    drawGame1Frame(frameBox, script.frames[0]);
    // Let the child see the first page, then turn to the first judged one.
    window.setTimeout(() => drawGame1Frame(frameBox, script.frames[stage.currentFrame]), 900);

    const onKey = (event: KeyboardEvent) => {
      const judgement = KEY_BINDINGS[event.key];
      if (judgement === undefined) {
        return;
      }
      stage.choose(judgement, clock.now());
      if (stage.isComplete) {
        detach();
        this.panel.recordStage(stage.toStageLog());
        this.playNextStage();
      } else {
        drawGame1Frame(frameBox, script.frames[stage.currentFrame]);
      }
    };
    const onBlur = () => {
      stage.abandon();
      detach();
      this.showMessage("Stage interrupted — it was not recorded. Start the stage again.");
      this.playGame1();
    };
    const detach = () => {
      window.removeEventListener("keydown", onKey);
      window.removeEventListener("blur", onBlur);
    };
    window.addEventListener("keydown", onKey);
    window.addEventListener("blur", onBlur);
    this.cleanupStage = detach;
  }

  private playGame2(stageName: Exclude<GameStage, "game1">): void {
    const sessionId = this.panel.currentSessionId!;
    const script = makeGame2Script(
      stageName,
      {
        durationS: this.config.stageDurationS[stageName],
        regionCount: this.config.regionCount,
      },
      `${this.config.scriptSeed}:${sessionId}`,
    );
    const stage = new Game2Stage(script, sessionId);
    const clock = new PerformanceClock();
    const canvas = el<HTMLCanvasElement>("sky");
    el<HTMLDivElement>("stage-title").textContent =
      `Watch the comets. When one flies off, press the number of the region it left through. (${stageName})`;
    this.showArea("game2");
    this.renderRegionButtons((region) => stage.chooseRegion(region, clock.now()));

    let raf = 0;
    const tick = () => {
      const t = clock.now();
      drawGame2Scene(canvas, script, t, stage.answeredTargets);
      if (t >= script.durationS) {
        stop();
        stage.finish();
        this.panel.recordStage(stage.toStageLog());
        this.playNextStage();
        return;
      }
      raf = window.requestAnimationFrame(tick);
    };
    const onKey = (event: KeyboardEvent) => {
      const digit = Number.parseInt(event.key, 10);
      if (Number.isInteger(digit) && digit >= 1 && digit <= script.regionCount) {
        stage.chooseRegion(digit - 1, clock.now());
      }
    };
    const onBlur = () => {
      stage.abandon();
      stop();
      this.showMessage("Stage interrupted — it was not recorded. Start the stage again.");
      this.playGame2(stageName);
    };
    const stop = () => {
      window.cancelAnimationFrame(raf);
      window.removeEventListener("keydown", onKey);
      window.removeEventListener("blur", onBlur);
    };
    window.addEventListener("keydown", onKey);
    window.addEventListener("blur", onBlur);
    this.cleanupStage = stop;
    raf = window.requestAnimationFrame(tick);
  }

  private renderRegionButtons(onPick: (region: number) => void): void {
    const bar = el<HTMLDivElement>("regions");
    bar.innerHTML = "";
    for (let r = 0; r < this.config.regionCount; r++) {
      const button = document.createElement("button");
      button.textContent = String(r + 1);
      button.addEventListener("click", () => onPick(r));
      bar.appendChild(button);
    }
  }

  private showArea(which: "game1" | "game2" | "none"): void {
    el("game1-area").style.display = which === "game1" ? "" : "none";
    el("game2-area").style.display = which === "game2" ? "" : "none";
  }

  private showMessage(text: string): void {
    el<HTMLDivElement>("status").textContent = text;
  }

  private renderPanel(): void {
    const phase = this.panel.state;
    el<HTMLButtonElement>("start").disabled = phase === "submitting";
    el<HTMLButtonElement>("submit").disabled = phase !== "ready";
    el<HTMLButtonElement>("retry").style.display = phase === "offline" ? "" : "none";
    const verdictBox = el<HTMLDivElement>("verdict");
    if (phase === "done" && this.panel.lastVerdict !== null) {
      const view = this.panel.lastVerdict;
      verdictBox.innerHTML =
        `<h2>${view.headline}</h2><p>${view.detail}</p>` +
        `<p class="fine">model ${view.modelVersion}</p>`;
      this.showArea("none");
    } else if (phase === "rejected") {
      verdictBox.innerHTML =
        `<h2>Submission rejected</h2><ul>${this.panel.lastViolations
          .map((v) => `<li>${escapeHtml(v)}</li>`)
          .join("")}</ul>`;
    } else if (phase === "offline") {
      verdictBox.innerHTML = `<h2>Could not reach the service</h2><p>${escapeHtml(
        this.panel.lastMessage,
      )}</p><p>The session is saved on this device; retry when back online.</p>`;
    } else if (phase === "ready") {
      verdictBox.innerHTML = "<p>All four stages recorded. Ready to submit.</p>";
      this.showArea("none");
    } else if (phase === "collecting") {
      const done = STAGES.length - this.panel.remainingStages.length;
      this.showMessage(`Stage ${done + 1} of ${STAGES.length}`);
      verdictBox.innerHTML = "";
    } else {
      verdictBox.innerHTML = "";
    }
    const balance = this.panel.pilotBalance;
    el<HTMLDivElement>("pilot").textContent =
      balance === null
        ? ""
        : `error balance z=${balance.z.toFixed(2)}` +
          (balance.significant ? " (uneven halves — check conditions)" : "");
  }
}

async function boot(): Promise<void> {
  const config = await loadConfig();
  new App(config);
}

void boot();

function escapeHtml(text: string): string {
  return text.replace(/[&<>"']/g, (c) => `&#${c.charCodeAt(0)};`);
}
