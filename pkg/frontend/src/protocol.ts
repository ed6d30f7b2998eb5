// Wire types for the bridge protocol (see docs/protocol.md, version 1).

export type Loa = "teleoperation" | "autonomy";
export type Cell = [number, number];

export interface HelloMsg {
  type: "hello";
  version: number;
  scenario: string;
  variant: string;
  seed: number;
  dt: number;
  resolution: number;
  map_rows: string[];
  waypoints: Record<string, Cell>;
  start: string;
  route: string[];
  limits: { v_max: number; omega_max: number };
}

export interface SwitchInfo {
  t: number;
  initiator: "ai" | "human";
  from: Loa;
  to: Loa;
}

export interface TelemetryMsg {
  type: "telemetry";
  k: number;
  t: number;
  x: number;
  y: number;
  heading: number;
  linear_speed: number;
  angular_speed: number;
  loa: Loa;
  goal: Cell | null;
  path: Cell[];
  belief_add: Cell[];
  belief_remove: Cell[];
  availability: { filtered_yaw: number; degree: number; attending: boolean };
  mean_error: number;
  last_switch: SwitchInfo | null;
  next_waypoint: string | null;
  waypoints_remaining: string[];
  status: string;
  collided: boolean;
}

export interface AckMsg {
  type: "ack";
  cmd: string;
  seq: number | null;
  ok: boolean;
  ignored: boolean;
  clamped: boolean;
  reason: string | null;
}

export interface ErrorMsg {
  type: "error";
  reason: string;
  seq: number | null;
}

export type ServerMsg = HelloMsg | TelemetryMsg | AckMsg | ErrorMsg;

export type ClientMsg =
  | { type: "teleop"; linear: number; angular: number; seq?: number }
  | { type: "set_goal"; cell: Cell; seq?: number }
  | { type: "request_loa"; mode: Loa; seq?: number }
  | { type: "yaw"; deg: number; seq?: number }
  | { type: "pause"; seq?: number }
  | { type: "resume"; seq?: number }
  | { type: "reset"; seq?: number };

export function parseServerMsg(text: string): ServerMsg | null {
  let obj: unknown;
  try {
    obj = JSON.parse(text);
  } catch {
    return null;
  }
  if (typeof obj !== "object" || obj === null) return null;
  const type = (obj as { type?: unknown }).type;
  if (type === "hello" || type === "telemetry" || type === "ack" || type === "error") {
    return obj as ServerMsg;
  }
  return null;
}

export const cellKey = (c: Cell): string => `${c[0]},${c[1]}`;
