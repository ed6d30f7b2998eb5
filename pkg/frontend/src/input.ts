// Keyboard/click/slider state -> command stream, emitted at a fixed rate
// by tick() (the browser drives it from setInterval; tests call it directly).

import { Cell, ClientMsg, Loa } from "./protocol.js";

export type Sender = (msg: ClientMsg) => void;

export interface InputOptions {
  vMax: number;
  omegaMax: number;
  lookAwayYaw: number;
  lookAwayRampS: number;
}

const DEFAULTS: InputOptions = {
  vMax: 1.0,
  omegaMax: Math.PI,
  lookAwayYaw: 60,
  lookAwayRampS: 0.5,
};

const DRIVE_KEYS = new Set(["ArrowUp", "ArrowDown", "ArrowLeft", "ArrowRight"]);

export class InputController {
  private held = new Set<string>();
  private sliderYaw = 0;
  private lookAway = false;
  private lookAwayLevel = 0; // 0..1, animated toward the toggle state
  readonly opts: InputOptions;

  constructor(private send: Sender, opts: Partial<InputOptions> = {}) {
    this.opts = { ...DEFAULTS, ...opts };
  }

  keyDown(key: string): boolean {
    if (!DRIVE_KEYS.has(key)) return false;
    this.held.add(key);
    return true;
  }

  keyUp(key: string): void {
    this.held.delete(key);
  }

  setSlider(deg: number): void {
    this.sliderYaw = Math.max(-90, Math.min(90, deg));
  }

  setLookAway(on: boolean): void {
    this.lookAway = on;
  }

  get lookingAway(): boolean {
    return this.lookAway;
  }

  clickCell(cell: Cell | null): void {
    if (cell === null) return; // clicks outside the map are ignored
    this.send({ type: "set_goal", cell });
  }

  toggleLoa(current: Loa | null): void {
    if (current === null) return;
    const mode: Loa = current === "teleoperation" ? "autonomy" : "teleoperation";
    this.send({ type: "request_loa", mode });
  }

  pause(): void {
    this.send({ type: "pause" });
  }

  resume(): void {
    this.send({ type: "resume" });
  }

  reset(): void {
    this.send({ type: "reset" });
  }

  /** Emit this period's commands; dtS is the tick period in seconds. */
  tick(dtS = 0.1): void {
    if (this.held.size > 0) {
      let linear = 0;
      let angular = 0;
      if (this.held.has("ArrowUp")) linear += this.opts.vMax;
      if (this.held.has("ArrowDown")) linear -= 0.5 * this.opts.vMax;
      if (this.held.has("ArrowLeft")) angular -= 0.5 * this.opts.omegaMax;
      if (this.held.has("ArrowRight")) angular += 0.5 * this.opts.omegaMax;
      this.send({ type: "teleop", linear, angular });
    }
    const target = this.lookAway ? 1 : 0;
    const step = dtS / this.opts.lookAwayRampS;
    if (this.lookAwayLevel < target) this.lookAwayLevel = Math.min(target, this.lookAwayLevel + step);
    else if (this.lookAwayLevel > target) this.lookAwayLevel = Math.max(target, this.lookAwayLevel - step);
    const yaw = this.lookAway || this.lookAwayLevel > 0
      ? this.lookAwayLevel * this.opts.lookAwayYaw
      : this.sliderYaw;
    this.send({ type: "yaw", deg: yaw });
  }
}
