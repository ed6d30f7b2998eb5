"""Pure-pursuit style path following."""

import math
from dataclasses import dataclass

from ..world.robot import KinematicLimits, RobotState, VelocityCommand, wrap_angle
from .planner import Path


@dataclass(frozen=True)
class FollowerParams:
    lookahead: float = 0.75
    decel_radius: float = 1.5
    goal_tol: float = 0.15
    v_min: float = 0.05  # floor while approaching, so the decel ramp terminates
    k_ang: float = 2.5


def follow(
    path: Path,
    state: RobotState,
    limits: KinematicLimits = KinematicLimits(),
    params: FollowerParams = FollowerParams(),
) -> tuple[VelocityCommand, bool]:
    """Steer toward the lookahead point on the path.

    Linear speed is v_max scaled by the heading error (cos, clamped at 0)
    and by a linear deceleration ramp inside decel_radius of the goal.
    Returns (command, goal_reached); at the goal the command is zero.
    """
    s_here, _ = path.progress(state.x, state.y)
    remaining = float(path.cum[-1]) - s_here
    if remaining <= params.goal_tol:
        return VelocityCommand(0.0, 0.0), True
    tx, ty = path.point_at(s_here + params.lookahead)
    err = wrap_angle(math.atan2(ty - state.y, tx - state.x) - state.heading)
    angular = max(-limits.omega_max, min(limits.omega_max, params.k_ang * err))
    heading_scale = max(0.0, math.cos(err))
    ramp = min(1.0, remaining / params.decel_radius)
    linear = limits.v_max * heading_scale * ramp
    if 0.0 < linear < params.v_min:
        linear = params.v_min
    return VelocityCommand(linear, angular), False
