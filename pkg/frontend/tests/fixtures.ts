import { HelloMsg, TelemetryMsg } from "../src/protocol.js";

export function helloFixture(): HelloMsg {
  return {
    type: "hello",
    version: 1,
    scenario: "fixture",
    variant: "caa-mi",
    seed: 0,
    dt: 0.1,
    resolution: 0.25,
    map_rows: ["#####", "#...#", "#.#.#", "#...#", "#####"],
    waypoints: { A: [1, 1], B: [3, 3] },
    start: "A",
    route: ["B"],
    limits: { v_max: 1.0, omega_max: Math.PI },
  };
}

export function telemetryFixture(patch: Partial<TelemetryMsg> = {}): TelemetryMsg {
  return {
    type: "telemetry",
    k: 0,
    t: 0.0,
    x: 0.375,
    y: 0.375,
    heading: 0,
    linear_speed: 0,
    angular_speed: 0,
    loa: "teleoperation",
    goal: null,
    path: [],
    belief_add: [],
    belief_remove: [],
    availability: { filtered_yaw: 0, degree: 1.0, attending: true },
    mean_error: 0,
    last_switch: null,
    next_waypoint: "B",
    waypoints_remaining: ["B"],
    status: "running",
    collided: false,
    ...patch,
  };
}
