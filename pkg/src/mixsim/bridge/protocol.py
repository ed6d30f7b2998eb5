"""Wire protocol for the live operator console.

One WebSocket text frame carries one JSON object with a ``type``
discriminator. Field-by-field schema: docs/protocol.md. The codec is
deliberately dumb: commands map 1:1 onto the trial loop's command
vocabulary, control messages (pause/resume/reset) act on the session.
"""

import json
from dataclasses import dataclass

import numpy as np

from ..commands import Command, RequestLoaCmd, SetGoalCmd, TeleopCmd, YawCmd
from ..harness.trial import TelemetrySnapshot, TrialRunner
from ..world.robot import KinematicLimits, LoaMode

PROTOCOL_VERSION = 1

CONTROL_PAUSE = "pause"
CONTROL_RESUME = "resume"
CONTROL_RESET = "reset"
CONTROL_TYPES = (CONTROL_PAUSE, CONTROL_RESUME, CONTROL_RESET)


class ProtocolError(ValueError):
    pass


@dataclass(frozen=True)
class DecodedMessage:
    kind: str  # "command" | "control"
    command: Command | None
    control: str | None
    seq: int | None
    clamped: bool = False
    ignored_reason: str | None = None


def decode_message(text: str, limits: KinematicLimits, loa: LoaMode, belief_occ) -> DecodedMessage:
    """Parse and validate one client frame against current session state."""
    try:
        msg = json.loads(text)
    except json.JSONDecodeError as e:
        raise ProtocolError(f"not valid JSON: {e}") from e
    if not isinstance(msg, dict) or "type" not in msg:
        raise ProtocolError("message must be an object with a 'type' field")
    kind = msg["type"]
    seq = msg.get("seq")
    if seq is not None and not isinstance(seq, int):
        raise ProtocolError("'seq' must be an integer")

    if kind in CONTROL_TYPES:
        return DecodedMessage("control", None, kind, seq)
    if kind == "teleop":
        try:
            v = float(msg["linear"])
            w = float(msg["angular"])
        except (KeyError, TypeError, ValueError) as e:
            raise ProtocolError("teleop needs numeric 'linear' and 'angular'") from e
        clamped = abs(v) > limits.v_max + 1e-12 or abs(w) > limits.omega_max + 1e-12
        if loa is not LoaMode.TELEOPERATION:
            return DecodedMessage(
                "command", None, None, seq, clamped, ignored_reason="robot is in autonomy"
            )
        return DecodedMessage("command", TeleopCmd(v, w), None, seq, clamped)
    if kind == "set_goal":
        try:
            r, c = int(msg["cell"][0]), int(msg["cell"][1])
        except (KeyError, TypeError, ValueError, IndexError) as e:
            raise ProtocolError("set_goal needs 'cell': [row, col]") from e
        h, w = belief_occ.shape
        if not (0 <= r < h and 0 <= c < w):
            return DecodedMessage(
                "command", None, None, seq, ignored_reason="cell outside the arena"
            )
        if belief_occ[r, c] != 0:
            return DecodedMessage(
                "command", None, None, seq, ignored_reason="cell occupied in belief map"
            )
        return DecodedMessage("command", SetGoalCmd((r, c)), None, seq)
    if kind == "request_loa":
        try:
            mode = LoaMode(msg["mode"])
        except (KeyError, ValueError) as e:
            raise ProtocolError("request_loa needs 'mode': teleoperation|autonomy") from e
        return DecodedMessage("command", RequestLoaCmd(mode), None, seq)
    if kind == "yaw":
        try:
            deg = float(msg["deg"])
        except (KeyError, TypeError, ValueError) as e:
            raise ProtocolError("yaw needs numeric 'deg'") from e
        return DecodedMessage("command", YawCmd(deg), None, seq)
    raise ProtocolError(f"unknown message type {kind!r}")


def ack_message(cmd_type: str, seq, ok=True, ignored=False, clamped=False, reason=None) -> dict:
    return {
        "type": "ack",
        "cmd": cmd_type,
        "seq": seq,
        "ok": ok,
        "ignored": ignored,
        "clamped": clamped,
        "reason": reason,
    }


def error_message(reason: str, seq=None) -> dict:
    return {"type": "error", "reason": reason, "seq": seq}


def hello_message(runner: TrialRunner) -> dict:
    sc = runner.scenario
    grid = runner.grid
    rows = []
    for r in range(grid.height_cells):
        rows.append("".join("#" if grid.cells[r, c] else "." for c in range(grid.width_cells)))
    return {
        "type": "hello",
        "version": PROTOCOL_VERSION,
        "scenario": sc.name,
        "variant": sc.variant.value,
        "seed": sc.seed,
        "dt": sc.dt,
        "resolution": grid.resolution,
        "map_rows": rows,
        "waypoints": {label: [r, c] for label, (r, c) in sorted(runner.waypoints.items())},
        "start": sc.start_label,
        "route": list(sc.waypoint_labels),
        "limits": {"v_max": sc.limits.v_max, "omega_max": sc.limits.omega_max},
    }


def telemetry_message(
    snap: TelemetrySnapshot, prev_occ: np.ndarray | None, status: str | None = None
) -> tuple[dict, np.ndarray]:
    """Serialize one snapshot; belief cells are sent as deltas against the
    previously sent occupancy (the hello map is the initial baseline)."""
    occ = snap.belief_occ
    if prev_occ is None:
        added = np.argwhere(occ != 0)
        removed = np.empty((0, 2), dtype=int)
    else:
        added = np.argwhere((occ != 0) & (prev_occ == 0))
        removed = np.argwhere((occ == 0) & (prev_occ != 0))
    msg = {
        "type": "telemetry",
        "k": snap.k,
        "t": round(snap.t, 6),
        "x": round(snap.x, 6),
        "y": round(snap.y, 6),
        "heading": round(snap.heading, 6),
        "linear_speed": round(snap.linear_speed, 6),
        "angular_speed": round(snap.angular_speed, 6),
        "loa": snap.loa.value,
        "goal": list(snap.goal) if snap.goal else None,
        "path": [[r, c] for r, c in snap.path_cells] if snap.path_cells else [],
        "belief_add": [[int(r), int(c)] for r, c in added],
        "belief_remove": [[int(r), int(c)] for r, c in removed],
        "availability": {
            "filtered_yaw": round(snap.availability.filtered_yaw, 6),
            "degree": round(snap.availability.degree, 6),
            "attending": snap.availability.attending,
        },
        "mean_error": round(snap.mean_error, 6),
        "last_switch": (
            {
                "t": round(snap.last_switch.t, 6),
                "initiator": snap.last_switch.initiator,
                "from": snap.last_switch.from_mode.value,
                "to": snap.last_switch.to_mode.value,
            }
            if snap.last_switch
            else None
        ),
        "next_waypoint": snap.next_waypoint,
        "waypoints_remaining": snap.waypoints_remaining,
        "status": status if status is not None else snap.status,
        "collided": snap.collided,
    }
    return msg, occ.copy()
