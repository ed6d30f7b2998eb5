"""Single-trial orchestration.

One ``TrialRunner`` owns all mutable simulation state and advances it tick
by tick. Scripted operators, the live bridge, and command-log replay all
drive the very same loop by handing it commands, so a recorded live
session replayed headless reproduces the identical decision log.

Per-seed determinism: one ``SeedSequence`` is split into fixed-purpose
streams (schedule placement, sensor noise, operator behaviour), so paired
variants see identical degradation placement.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ..attention import AttentionMonitor, AvailabilityEstimate
from ..commands import (
    Command,
    RequestLoaCmd,
    SetGoalCmd,
    TeleopCmd,
    YawCmd,
    command_to_record,
)
from ..control.controller import AI, LoaSwitch, MixedInitiativeController
from ..control.fuzzy import SWITCH
from ..nav.expert import ExpertOracle
from ..nav.follower import follow
from ..nav.planner import Path, dilate_occupancy, plan, replan_if_blocked
from ..operator_model import ScriptedOperator, SecondaryScore, score_secondary, yaw_trace_sample
from ..world.belief import BeliefMap
from ..world.grid import Cell
from ..world.robot import STOP, LoaMode, RobotState, VelocityCommand, step
from ..world.sensor import sense
from .scenario import Scenario

RUNNING = "running"
DONE = "done"
TIMEOUT = "timeout"
STOPPED = "stopped"

# slow in-place sweep used when no route exists in the current belief
RECOVERY_SPIN = VelocityCommand(0.0, 0.6)


@dataclass
class TelemetrySnapshot:
    k: int
    t: float
    x: float
    y: float
    heading: float
    linear_speed: float
    angular_speed: float
    loa: LoaMode
    goal: Cell | None
    path_cells: list[Cell] | None
    availability: AvailabilityEstimate
    mean_error: float
    last_switch: LoaSwitch | None
    next_waypoint: str | None
    waypoints_remaining: list[str]
    status: str
    collided: bool
    resolution: float
    belief_occ: np.ndarray = field(repr=False, default=None)


@dataclass
class LegRecord:
    label: str
    t_start: float
    expert_bound: float
    odometry: float = 0.0
    t_end: float | None = None

    @property
    def completed(self) -> bool:
        return self.t_end is not None


@dataclass
class RunMetrics:
    variant: str
    seed: int
    completed: bool
    reason: str
    completion_time: float
    ticks: int
    switches_total: int
    switches_ai: int
    switches_human: int
    ai_auto_to_teleop_while_away: int
    time_teleop: float
    time_autonomy: float
    collisions: int
    odometry: float
    secondary: SecondaryScore
    legs: list[LegRecord]
    noise_interval: tuple[float, float]
    distraction_interval: tuple[float, float]

    def dominance_ok(self, waypoint_radius: float) -> bool:
        return all(
            leg.odometry + waypoint_radius + 1e-6 >= leg.expert_bound
            for leg in self.legs
            if leg.completed
        )


class TrialRunner:
    def __init__(self, scenario: Scenario, collect_log: bool = True):
        scenario.validate()
        self.scenario = scenario
        self.collect_log = collect_log
        children = np.random.SeedSequence(scenario.seed).spawn(3)
        self.schedule_rng = np.random.default_rng(children[0])
        self.sensor_rng = np.random.default_rng(children[1])
        self.operator_rng = np.random.default_rng(children[2])
        self.noise_schedule, self.distraction_schedule = scenario.resolve_schedules(
            self.schedule_rng
        )
        self.grid = scenario.arena.grid
        self.waypoints = scenario.arena.waypoints
        start = self.waypoints[scenario.start_label]
        sx, sy = self.grid.cell_center(start)
        self.robot = RobotState(
            x=sx,
            y=sy,
            heading=scenario.initial_heading,
            active_loa=scenario.variant.initial_loa(),
        )
        self.belief = BeliefMap(self.grid, scenario.belief_decay_s)
        self.expert = ExpertOracle(self.grid, scenario.limits, scenario.follower)
        self.controller = MixedInitiativeController(
            scenario.variant, scenario.controller, scenario.rule_base
        )
        self.monitor = AttentionMonitor(
            alpha=scenario.attention.alpha,
            cal=scenario.attention.calibration(),
            dropout_grace=scenario.attention.dropout_grace,
        )
        self.k = 0
        self.status = RUNNING
        self.path: Path | None = None
        self.switches: list[LoaSwitch] = []
        self.time_in = {LoaMode.TELEOPERATION: 0.0, LoaMode.AUTONOMY: 0.0}
        self.collisions = 0
        self.odometry = 0.0
        self.ai_auto_to_teleop_while_away = 0
        self._wp_index = 0
        self._teleop: VelocityCommand | None = None
        self._teleop_tick = -(10**9)
        self._teleop_hold_ticks = max(1, int(round(scenario.teleop_hold_s / scenario.dt)))
        self._last_ctrl_goal: Cell | None = None
        self._avail = self.monitor.update(0.0, 0.0)  # facing the screen at start
        self._mean_error = 0.0
        self.tick_rows: list[dict] = []
        self.command_rows: list[dict] = []
        self.switch_rows: list[dict] = []
        self.legs: list[LegRecord] = []
        self._begin_leg()

    # ------------------------------------------------------------------
    @property
    def t(self) -> float:
        return self.k * self.scenario.dt

    @property
    def finished(self) -> bool:
        return self.status in (DONE, TIMEOUT, STOPPED)

    def next_waypoint_label(self) -> str | None:
        if self._wp_index >= len(self.scenario.waypoint_labels):
            return None
        return self.scenario.waypoint_labels[self._wp_index]

    def next_waypoint_cell(self) -> Cell | None:
        label = self.next_waypoint_label()
        return self.waypoints[label] if label else None

    def _begin_leg(self) -> None:
        label = self.next_waypoint_label()
        if label is None:
            return
        bound = self.expert.leg_lower_bound(self.robot, self.waypoints[label])
        self.legs.append(LegRecord(label=label, t_start=self.t, expert_bound=bound))

    def snapshot(self) -> TelemetrySnapshot:
        return TelemetrySnapshot(
            k=self.k,
            t=self.t,
            x=self.robot.x,
            y=self.robot.y,
            heading=self.robot.heading,
            linear_speed=self.robot.linear_speed,
            angular_speed=self.robot.angular_speed,
            loa=self.robot.active_loa,
            goal=self.robot.goal,
            path_cells=self.path.cells if self.path is not None else None,
            availability=self._avail,
            mean_error=self._mean_error,
            last_switch=self.switches[-1] if self.switches else None,
            next_waypoint=self.next_waypoint_label(),
            waypoints_remaining=list(self.scenario.waypoint_labels[self._wp_index :]),
            status=self.status,
            collided=self.robot.collided,
            resolution=self.grid.resolution,
            belief_occ=self.belief.occupancy(),
        )

    # ------------------------------------------------------------------
    def _record_switch(self, sw: LoaSwitch) -> None:
        self.switches.append(sw)
        if (
            sw.initiator == AI
            and sw.from_mode is LoaMode.AUTONOMY
            and sw.to_mode is LoaMode.TELEOPERATION
            and not self._avail.attending
        ):
            self.ai_auto_to_teleop_while_away += 1
        self.switch_rows.append(
            {
                "type": "switch",
                "k": self.k,
                "t": round(self.t, 6),
                "initiator": sw.initiator,
                "from": sw.from_mode.value,
                "to": sw.to_mode.value,
                "rule": sw.firing_rule,
                "attending": self._avail.attending,
                "availability": round(self._avail.degree, 9),
                "during_distraction": self.distraction_schedule.active(self.t),
            }
        )

    def _apply_switch(self, sw: LoaSwitch, ctrl_goal: Cell | None) -> None:
        self.robot.active_loa = sw.to_mode
        self._record_switch(sw)
        if sw.to_mode is LoaMode.TELEOPERATION:
            self.robot.goal = None
            self.path = None
            self._teleop = None
            self._teleop_tick = -(10**9)
        elif sw.initiator == AI and self.robot.goal is None:
            # the AI adopts the mission goal it is being judged against
            self.robot.goal = ctrl_goal
            self.path = None

    def step_tick(self, commands: list[Command]) -> TelemetrySnapshot:
        if self.finished:
            return self.snapshot()
        sc = self.scenario
        t = self.t
        yaw_seen = False
        ctrl_goal = self.robot.goal if self.robot.goal is not None else self.next_waypoint_cell()
        for cmd in commands:
            if self.collect_log:
                self.command_rows.append({"k": self.k, **command_to_record(cmd)})
            if isinstance(cmd, YawCmd):
                self._avail = self.monitor.update(t, cmd.yaw)
                yaw_seen = True
            elif isinstance(cmd, TeleopCmd):
                self._teleop = VelocityCommand(cmd.linear, cmd.angular).clamped(sc.limits)
                self._teleop_tick = self.k
            elif isinstance(cmd, SetGoalCmd):
                if self.belief.occupancy()[cmd.cell[0], cmd.cell[1]] == 0:
                    if cmd.cell != self.robot.goal:
                        self.robot.goal = cmd.cell
                        self.path = None
            elif isinstance(cmd, RequestLoaCmd):
                # pinned variants have no switch UI; otherwise human
                # authority is honored immediately, never blocked
                if sc.variant.switching:
                    sw = self.controller.apply_operator_switch(t, cmd.mode, self.robot.active_loa)
                    if sw is not None:
                        self._apply_switch(sw, ctrl_goal)
        if not yaw_seen:
            self._avail = self.monitor.update(t, None)

        scan = sense(self.grid, self.robot, self.noise_schedule, t, self.sensor_rng, sc.laser)
        self.belief.integrate(scan, self.robot)

        ctrl_goal = self.robot.goal if self.robot.goal is not None else self.next_waypoint_cell()
        if ctrl_goal != self._last_ctrl_goal:
            self.controller.notify_goal_change()
            self._last_ctrl_goal = ctrl_goal

        profile = self.expert.expected(self.robot, ctrl_goal)
        actual_speed = abs(self.robot.linear_speed)
        result = self.controller.update(
            t, profile.expected_speed, actual_speed, self._avail.degree, self.robot.active_loa
        )
        self._mean_error = result.mean_error
        if result.switch is not None:
            self._apply_switch(result.switch, ctrl_goal)

        if self.robot.active_loa is LoaMode.AUTONOMY and self.robot.goal is not None:
            cell = self.grid.cell_of(self.robot.x, self.robot.y)
            self.belief.clear_cell(cell)
            if self.robot.collided:
                self.path = None  # wedged: replan from scratch
            occ = dilate_occupancy(self.belief.occupancy(), cell, self.robot.goal)
            if self.path is None or self.path.goal != self.robot.goal:
                self.path = plan(occ, self.grid.resolution, cell, self.robot.goal)
            else:
                self.path = replan_if_blocked(occ, self.path, self.robot, self.grid.resolution)
            if self.path is not None:
                cmd, reached = follow(self.path, self.robot, sc.limits, sc.follower)
                if reached:
                    self.robot.goal = None
                    self.path = None
                    cmd = STOP
            else:
                cmd = RECOVERY_SPIN  # no route: sweep the scan until phantoms decay
        elif self.robot.active_loa is LoaMode.TELEOPERATION:
            if self._teleop is not None and self.k - self._teleop_tick < self._teleop_hold_ticks:
                cmd = self._teleop
            else:
                cmd = STOP
        else:
            cmd = STOP

        px, py = self.robot.x, self.robot.y
        was_collided = self.robot.collided
        self.robot = step(self.grid, self.robot, cmd, sc.dt, sc.limits)
        moved = math.hypot(self.robot.x - px, self.robot.y - py)
        self.odometry += moved
        if self.legs and not self.legs[-1].completed:
            self.legs[-1].odometry += moved
        if self.robot.collided and not was_collided:
            self.collisions += 1
        self.time_in[self.robot.active_loa] += sc.dt

        if self.collect_log:
            fz = result.fuzzy_input
            self.tick_rows.append(
                {
                    "type": "tick",
                    "k": self.k,
                    "t": round(t, 6),
                    "loa": self.robot.active_loa.value,
                    "x": round(self.robot.x, 9),
                    "y": round(self.robot.y, 9),
                    "heading": round(self.robot.heading, 9),
                    "speed": round(self.robot.linear_speed, 9),
                    "expected_speed": round(profile.expected_speed, 9),
                    "mean_error": round(result.mean_error, 9),
                    "error_degree": round(fz.error_high, 9),
                    "availability": round(self._avail.degree, 9),
                    "attending": self._avail.attending,
                    "filtered_yaw": round(self._avail.filtered_yaw, 9),
                    "speed_degree": round(fz.speed_low, 9),
                    "action": result.decision.action,
                    "target": result.decision.target.value if result.decision.target else None,
                    "rule": result.decision.firing_rule,
                    "suppressed": result.suppressed,
                    "goal": list(ctrl_goal) if ctrl_goal else None,
                    "collided": self.robot.collided,
                    "phantoms": self.belief.phantom_count(),
                }
            )

        self.k += 1
        # waypoint progression (completion radius, strictly in order)
        while True:
            cell = self.next_waypoint_cell()
            if cell is None:
                break
            wx, wy = self.grid.cell_center(cell)
            if math.hypot(self.robot.x - wx, self.robot.y - wy) > sc.waypoint_radius:
                break
            self.legs[-1].t_end = self.t
            if self.robot.goal == cell:
                self.robot.goal = None
                self.path = None
            self._wp_index += 1
            if self._wp_index >= len(self.scenario.waypoint_labels):
                self.status = DONE
            else:
                self._begin_leg()
        if self.status is RUNNING and self.k >= sc.max_ticks:
            self.status = TIMEOUT
        return self.snapshot()

    # ------------------------------------------------------------------
    def run(self, driver, max_ticks: int | None = None) -> RunMetrics:
        limit = max_ticks if max_ticks is not None else self.scenario.max_ticks
        snap = self.snapshot()
        while not self.finished and self.k < limit:
            snap = self.step_tick(driver.commands(snap))
        if not self.finished:
            self.status = STOPPED
        return self.metrics()

    def metrics(self) -> RunMetrics:
        sc = self.scenario
        return RunMetrics(
            variant=sc.variant.value,
            seed=sc.seed,
            completed=self.status == DONE,
            reason=self.status,
            completion_time=self.k * sc.dt,
            ticks=self.k,
            switches_total=len(self.switches),
            switches_ai=sum(1 for s in self.switches if s.initiator == AI),
            switches_human=sum(1 for s in self.switches if s.initiator != AI),
            ai_auto_to_teleop_while_away=self.ai_auto_to_teleop_while_away,
            time_teleop=self.time_in[LoaMode.TELEOPERATION],
            time_autonomy=self.time_in[LoaMode.AUTONOMY],
            collisions=self.collisions,
            odometry=self.odometry,
            secondary=score_secondary(self.distraction_schedule, self.switches),
            legs=self.legs,
            noise_interval=(self.noise_schedule.start, self.noise_schedule.end),
            distraction_interval=(self.distraction_schedule.start, self.distraction_schedule.end),
        )


class ScriptedDriver:
    """Bundles the scripted operator with its head-yaw trace."""

    def __init__(self, runner: TrialRunner):
        sc = runner.scenario
        self.schedule = runner.distraction_schedule
        self.rng = runner.operator_rng
        self.operator = ScriptedOperator(
            profile=sc.operator,
            schedule=runner.distraction_schedule,
            waypoints=runner.waypoints,
            rng=runner.operator_rng,
            limits=sc.limits,
            follower=sc.follower,
            can_switch=sc.variant.switching,
        )

    def commands(self, snap: TelemetrySnapshot) -> list[Command]:
        out: list[Command] = [YawCmd(yaw_trace_sample(self.schedule, snap.t, self.rng))]
        out.extend(self.operator.act(snap))
        return out


class CommandLogDriver:
    """Replays a recorded command log tick-for-tick."""

    def __init__(self, rows: list[dict]):
        from ..commands import command_from_record

        self._by_tick: dict[int, list[Command]] = {}
        for row in rows:
            self._by_tick.setdefault(int(row["k"]), []).append(command_from_record(row))

    def commands(self, snap: TelemetrySnapshot) -> list[Command]:
        return self._by_tick.get(snap.k, [])


def run_trial(scenario: Scenario, collect_log: bool = True) -> tuple[RunMetrics, TrialRunner]:
    runner = TrialRunner(scenario, collect_log=collect_log)
    driver = ScriptedDriver(runner)
    metrics = runner.run(driver)
    return metrics, runner
