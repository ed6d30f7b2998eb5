"""Commands accepted by the trial loop.

Scripted operators, the live bridge, and command-log replay all feed the
simulation through this one vocabulary, applied in arrival order at tick
boundaries; that is what makes live sessions byte-replayable headless.
"""

from dataclasses import dataclass

from .world.grid import Cell
from .world.robot import LoaMode


@dataclass(frozen=True)
class TeleopCmd:
    linear: float
    angular: float


@dataclass(frozen=True)
class SetGoalCmd:
    cell: Cell


@dataclass(frozen=True)
class RequestLoaCmd:
    mode: LoaMode


@dataclass(frozen=True)
class YawCmd:
    yaw: float


Command = TeleopCmd | SetGoalCmd | RequestLoaCmd | YawCmd


def command_to_record(cmd: Command) -> dict:
    if isinstance(cmd, TeleopCmd):
        return {"type": "teleop", "linear": cmd.linear, "angular": cmd.angular}
    if isinstance(cmd, SetGoalCmd):
        return {"type": "set_goal", "cell": [cmd.cell[0], cmd.cell[1]]}
    if isinstance(cmd, RequestLoaCmd):
        return {"type": "request_loa", "mode": cmd.mode.value}
    if isinstance(cmd, YawCmd):
        return {"type": "yaw", "deg": cmd.yaw}
    raise TypeError(f"not a command: {cmd!r}")


def command_from_record(rec: dict) -> Command:
    kind = rec["type"]
    if kind == "teleop":
        return TeleopCmd(float(rec["linear"]), float(rec["angular"]))
    if kind == "set_goal":
        r, c = rec["cell"]
        return SetGoalCmd((int(r), int(c)))
    if kind == "request_loa":
        return RequestLoaCmd(LoaMode(rec["mode"]))
    if kind == "yaw":
        return YawCmd(float(rec["deg"]))
    raise ValueError(f"unknown command type {kind!r}")
