"""Scripted operator agents for headless trials.

The agent drives like a competent but imperfect human: in teleoperation it
steers along a mental route planned on the belief map (what the GUI shows)
at a skill-limited speed with steering noise; in autonomy it clicks the
next waypoint when the robot is idle. During scheduled distraction
intervals it is silent and its head is turned to the secondary-task
screen. Perceived stalls trigger judgment-based manual LOA switches.

The reaction delay is modelled as re-engagement latency: after a
distraction ends, after an LOA switch, or after a leg completes, the agent
issues nothing until the delay elapses.
"""

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .commands import Command, RequestLoaCmd, SetGoalCmd, TeleopCmd
from .control.controller import LoaSwitch
from .nav.follower import FollowerParams, follow
from .nav.planner import Path, dilate_occupancy, path_blocked, plan
from .world.grid import Cell
from .world.robot import KinematicLimits, LoaMode, RobotState


@dataclass(frozen=True)
class OperatorProfile:
    teleop_skill: float = 0.85  # fraction of v_max the operator sustains
    steering_noise: float = 0.1  # rad/s stdev added to steering commands
    reaction_delay: float = 0.4
    patience: float = 4.0  # seconds of perceived stall before a manual switch
    stall_dist: float = 0.2  # displacement below this over the patience window = stall


@dataclass(frozen=True)
class DistractionSchedule:
    start: float
    end: float
    head_turn_yaw: float = 60.0
    item_period: float = 4.0
    transition_s: float = 0.3
    jitter_deg: float = 2.0

    def __post_init__(self):
        if not self.start < self.end:
            raise ValueError("distraction interval must have start < end")

    def active(self, t: float) -> bool:
        return self.start <= t < self.end


NO_DISTRACTION = DistractionSchedule(-2.0, -1.0)


def yaw_trace_sample(schedule: DistractionSchedule, t: float, rng: np.random.Generator) -> float:
    """Head yaw at time t: plateau inside the interval, linear 0.3 s turns
    at both edges, plus small gaussian jitter."""
    y = schedule.head_turn_yaw
    tr = schedule.transition_s
    if t < schedule.start:
        base = 0.0
    elif t < schedule.start + tr:
        base = y * (t - schedule.start) / tr
    elif t < schedule.end:
        base = y
    elif t < schedule.end + tr:
        base = y * (1.0 - (t - schedule.end) / tr)
    else:
        base = 0.0
    return base + rng.normal(0.0, schedule.jitter_deg)


@dataclass(frozen=True)
class SecondaryScore:
    presented: int
    completed: int
    interruptions: int


def score_secondary(schedule: DistractionSchedule, switches: list[LoaSwitch]) -> SecondaryScore:
    """Secondary-task proxy: items complete at item_period cadence during
    the distraction interval; any switch into teleoperation voids the item
    in progress and counts as an interruption."""
    if schedule.end <= schedule.start or schedule.start < 0:
        return SecondaryScore(0, 0, 0)
    presented = int((schedule.end - schedule.start) / schedule.item_period)
    to_teleop = [
        s.t
        for s in switches
        if s.to_mode is LoaMode.TELEOPERATION and schedule.start <= s.t < schedule.end
    ]
    voided = set()
    for t in to_teleop:
        slot = int((t - schedule.start) / schedule.item_period)
        if slot < presented:
            voided.add(slot)
    return SecondaryScore(presented, presented - len(voided), len(to_teleop))


class ScriptedOperator:
    """Deterministic operator policy over telemetry snapshots."""

    def __init__(
        self,
        profile: OperatorProfile,
        schedule: DistractionSchedule,
        waypoints: dict[str, Cell],
        rng: np.random.Generator,
        limits: KinematicLimits = KinematicLimits(),
        follower: FollowerParams = FollowerParams(),
        can_switch: bool = True,
        click_throttle: float = 1.0,
    ):
        self.profile = profile
        self.schedule = schedule
        self.waypoints = waypoints
        self.rng = rng
        self.limits = limits
        self.follower = follower
        self.can_switch = can_switch
        self.click_throttle = click_throttle
        self._engaged_at: float | None = None
        self._hist: deque[tuple[float, float, float]] = deque()
        self._mental_path: Path | None = None
        self._last_click_t = -math.inf
        self._seen_switch_t: float | None = None
        self._seen_waypoint: str | None = None

    def _reset_judgment(self, t: float) -> None:
        self._engaged_at = t
        self._hist.clear()
        self._mental_path = None

    def act(self, snap) -> list[Command]:
        t = snap.t
        if self.schedule.active(t):
            self._engaged_at = None
            self._hist.clear()
            return []
        if self._engaged_at is None:
            self._reset_judgment(t)
        # re-engage on perceivable events: LOA switches and leg changes
        sw_t = snap.last_switch.t if snap.last_switch else None
        if sw_t != self._seen_switch_t:
            self._seen_switch_t = sw_t
            self._reset_judgment(t)
        if snap.next_waypoint != self._seen_waypoint:
            self._seen_waypoint = snap.next_waypoint
            self._reset_judgment(t)
        if t - self._engaged_at < self.profile.reaction_delay:
            return []
        if snap.next_waypoint is None:
            return []

        wp_cell = self.waypoints[snap.next_waypoint]
        cmds: list[Command] = []

        # judgment-based manual switch on perceived stall
        self._hist.append((t, snap.x, snap.y))
        while self._hist and self._hist[0][0] < t - self.profile.patience - 1e-9:
            self._hist.popleft()
        if self.can_switch and self._hist[0][0] <= t - self.profile.patience + 1e-9:
            moved = math.hypot(snap.x - self._hist[0][1], snap.y - self._hist[0][2])
            busy = snap.loa is LoaMode.TELEOPERATION or snap.goal is not None
            if busy and moved < self.profile.stall_dist:
                self._reset_judgment(t)
                return [RequestLoaCmd(snap.loa.other())]

        if snap.loa is LoaMode.AUTONOMY:
            if snap.goal is None and t - self._last_click_t >= self.click_throttle:
                self._last_click_t = t
                cmds.append(SetGoalCmd(wp_cell))
            return cmds

        # teleoperation: steer along a mental route over the belief map,
        # keeping the same wall clearance a careful driver would
        state = RobotState(x=snap.x, y=snap.y, heading=snap.heading)
        cell = (int(snap.y / snap.resolution), int(snap.x / snap.resolution))
        path = self._mental_path
        if snap.collided:
            path = None
        occ = dilate_occupancy(snap.belief_occ, cell, wp_cell)
        if path is None or path.goal != wp_cell or path_blocked(occ, path, state, horizon_m=1.0):
            path = plan(occ, snap.resolution, cell, wp_cell)
            self._mental_path = path
        if path is None:
            # no visible route: scan around while the belief clears
            cmds.append(TeleopCmd(0.0, 0.5))
            return cmds
        cmd, reached = follow(path, state, self.limits, self.follower)
        if reached:
            return cmds
        v = min(cmd.linear, self.profile.teleop_skill * self.limits.v_max)
        w = cmd.angular + float(self.rng.normal(0.0, self.profile.steering_noise))
        w = max(-self.limits.omega_max, min(self.limits.omega_max, w))
        cmds.append(TeleopCmd(v, w))
        return cmds
