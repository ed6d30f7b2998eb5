// Console view model: every displayed fact derives from the latest
// snapshot (the console never predicts simulation state locally).

import {
  Cell,
  HelloMsg,
  ServerMsg,
  SwitchInfo,
  TelemetryMsg,
  cellKey,
} from "./protocol.js";

export interface EventEntry {
  t: number;
  initiator: "ai" | "human";
  from: string;
  to: string;
}

const STALE_AFTER_MS = 1000;

export class ConsoleViewModel {
  hello: HelloMsg | null = null;
  latest: TelemetryMsg | null = null;
  connected = false;
  /** cells occupied in the belief map beyond the static walls */
  beliefExtra = new Set<string>();
  staticWalls = new Set<string>();
  eventLog: EventEntry[] = [];
  toasts: string[] = [];
  private lastTelemetryAt: number | null = null;
  private lastSwitchSeen: string | null = null;

  onConnect(): void {
    this.connected = true;
  }

  onDisconnect(): void {
    this.connected = false;
  }

  applyMessage(msg: ServerMsg, nowMs: number): void {
    switch (msg.type) {
      case "hello":
        this.hello = msg;
        this.staticWalls.clear();
        msg.map_rows.forEach((row, r) => {
          for (let c = 0; c < row.length; c++) {
            if (row[c] === "#") this.staticWalls.add(`${r},${c}`);
          }
        });
        this.beliefExtra.clear();
        this.eventLog = [];
        this.lastSwitchSeen = null;
        break;
      case "telemetry":
        this.latest = msg;
        this.lastTelemetryAt = nowMs;
        for (const cell of msg.belief_add) {
          const key = cellKey(cell);
          if (!this.staticWalls.has(key)) this.beliefExtra.add(key);
        }
        for (const cell of msg.belief_remove) {
          this.beliefExtra.delete(cellKey(cell));
        }
        this.recordSwitch(msg.last_switch);
        break;
      case "ack":
        if (!msg.ok || msg.ignored) {
          this.toasts.push(
            `${msg.cmd}: ${msg.reason ?? (msg.ignored ? "ignored" : "rejected")}`
          );
        }
        break;
      case "error":
        this.toasts.push(`protocol error: ${msg.reason}`);
        break;
    }
  }

  private recordSwitch(sw: SwitchInfo | null): void {
    if (sw === null) return;
    const key = `${sw.t}:${sw.initiator}:${sw.from}:${sw.to}`;
    if (key === this.lastSwitchSeen) return;
    this.lastSwitchSeen = key;
    // append-only event log
    this.eventLog.push({ t: sw.t, initiator: sw.initiator, from: sw.from, to: sw.to });
  }

  bannerText(): string {
    if (this.latest === null) return "LOA: —";
    return `LOA: ${this.latest.loa.toUpperCase()}`;
  }

  statusText(): string {
    if (!this.connected) return "disconnected";
    return this.latest?.status ?? "connecting";
  }

  eventLogLines(): string[] {
    return this.eventLog.map(
      (e) =>
        `[${e.t.toFixed(1)}s] ${e.initiator === "ai" ? "AI" : "HUMAN"}: ${e.from} → ${e.to}`
    );
  }

  availabilityDegree(): number | null {
    return this.latest ? this.latest.availability.degree : null;
  }

  meanError(): number | null {
    return this.latest ? this.latest.mean_error : null;
  }

  isStale(nowMs: number): boolean {
    if (!this.connected || this.lastTelemetryAt === null) return true;
    return nowMs - this.lastTelemetryAt > STALE_AFTER_MS;
  }

  takeToasts(): string[] {
    const out = this.toasts;
    this.toasts = [];
    return out;
  }

  /** cell under a canvas pixel, or null when outside the arena */
  cellAtPixel(px: number, py: number, scale: number): Cell | null {
    if (this.hello === null) return null;
    const c = Math.floor(px / scale);
    const r = Math.floor(py / scale);
    const rows = this.hello.map_rows.length;
    const cols = this.hello.map_rows[0]?.length ?? 0;
    if (r < 0 || r >= rows || c < 0 || c >= cols) return null;
    return [r, c];
  }
}
