"""Robot state and differential-drive integration."""

import math
from dataclasses import dataclass, replace
from enum import Enum

from .grid import Cell, OccupancyGrid


class LoaMode(Enum):
    TELEOPERATION = "teleoperation"
    AUTONOMY = "autonomy"

    def other(self) -> "LoaMode":
        return LoaMode.AUTONOMY if self is LoaMode.TELEOPERATION else LoaMode.TELEOPERATION


@dataclass(frozen=True)
class KinematicLimits:
    v_max: float = 1.0
    omega_max: float = math.pi


@dataclass(frozen=True)
class VelocityCommand:
    linear: float = 0.0
    angular: float = 0.0

    def clamped(self, limits: KinematicLimits) -> "VelocityCommand":
        v = min(max(self.linear, -limits.v_max), limits.v_max)
        w = min(max(self.angular, -limits.omega_max), limits.omega_max)
        if v == self.linear and w == self.angular:
            return self
        return VelocityCommand(v, w)


STOP = VelocityCommand(0.0, 0.0)


@dataclass
class RobotState:
    x: float
    y: float
    heading: float  # radians in (-pi, pi]
    linear_speed: float = 0.0
    angular_speed: float = 0.0
    active_loa: LoaMode = LoaMode.TELEOPERATION
    goal: Cell | None = None
    collided: bool = False


def wrap_angle(a: float) -> float:
    """Normalize to (-pi, pi]."""
    a = math.fmod(a + math.pi, 2.0 * math.pi)
    if a <= 0.0:
        a += 2.0 * math.pi
    return a - math.pi


def step(
    grid: OccupancyGrid,
    state: RobotState,
    cmd: VelocityCommand,
    dt: float,
    limits: KinematicLimits = KinematicLimits(),
) -> RobotState:
    """Advance one tick: rotate, then translate along the new heading.

    Translation into an occupied cell is blocked: position holds, linear
    speed is zeroed and the collision flag is set for the tick. Rotation is
    never blocked.
    """
    cmd = cmd.clamped(limits)
    if cmd.angular == 0.0:
        heading = state.heading
    else:
        heading = wrap_angle(state.heading + cmd.angular * dt)
    nx = state.x + cmd.linear * math.cos(heading) * dt
    ny = state.y + cmd.linear * math.sin(heading) * dt
    target = grid.cell_of(nx, ny)
    if not grid.is_free(target):
        return replace(
            state,
            heading=heading,
            linear_speed=0.0,
            angular_speed=cmd.angular,
            collided=True,
        )
    return replace(
        state,
        x=nx,
        y=ny,
        heading=heading,
        linear_speed=cmd.linear,
        angular_speed=cmd.angular,
        collided=False,
    )
