"""Scenario files: everything a trial needs, in one YAML document.

Paths inside the file (map, rules) resolve relative to the file itself.
The ``random-overlap`` noise mode reproduces the experiment's degradation
design: one sensor-noise interval placed at random, with the operator
distraction interval placed uniformly inside it so the two always overlap.
"""

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
import yaml

from ..attention import YawCalibration
from ..control.controller import ControllerParams, Variant
from ..control.fuzzy import RuleBase
from ..nav.follower import FollowerParams
from ..nav.planner import plan
from ..operator_model import NO_DISTRACTION, DistractionSchedule, OperatorProfile
from ..world.grid import ArenaMap, load_map
from ..world.robot import KinematicLimits
from ..world.sensor import NO_NOISE, LaserConfig, NoiseSchedule


class ScenarioError(ValueError):
    """Invalid or internally inconsistent scenario."""


@dataclass(frozen=True)
class AttentionParams:
    alpha: float = 0.2
    attend_band: float = 15.0
    away_band: float = 30.0
    dropout_grace: float = 0.5

    def calibration(self) -> YawCalibration:
        return YawCalibration(self.attend_band, self.away_band)


@dataclass(frozen=True)
class NoiseConfig:
    mode: str = "none"  # none | fixed | random-overlap
    phantom_rate: float = 0.08
    start_s: float = 0.0
    end_s: float = 0.0
    duration_s: float = 60.0
    place_min_s: float = 20.0
    place_max_s: float = 120.0


@dataclass(frozen=True)
class DistractionConfig:
    mode: str = "none"  # none | fixed | random (inside the noise window)
    start_s: float = 0.0
    end_s: float = 0.0
    duration_s: float = 30.0
    head_turn_yaw: float = 60.0
    item_period_s: float = 4.0
    transition_s: float = 0.3
    jitter_deg: float = 2.0


@dataclass
class Scenario:
    name: str
    map_path: Path
    arena: ArenaMap
    start_label: str
    waypoint_labels: list[str]
    variant: Variant = Variant.CAA_MI
    seed: int = 0
    dt: float = 0.1
    timeout_s: float = 600.0
    waypoint_radius: float = 0.5
    initial_heading: float = 0.0
    teleop_hold_s: float = 0.3
    belief_decay_s: float = 2.0
    limits: KinematicLimits = field(default_factory=KinematicLimits)
    laser: LaserConfig = field(default_factory=LaserConfig)
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    distraction: DistractionConfig = field(default_factory=DistractionConfig)
    operator: OperatorProfile = field(default_factory=OperatorProfile)
    attention: AttentionParams = field(default_factory=AttentionParams)
    controller: ControllerParams = field(default_factory=ControllerParams)
    follower: FollowerParams = field(default_factory=FollowerParams)
    rule_base: RuleBase | None = None

    @property
    def max_ticks(self) -> int:
        return int(round(self.timeout_s / self.dt))

    def with_overrides(
        self, variant: Variant | str | None = None, seed: int | None = None
    ) -> "Scenario":
        out = self
        if variant is not None:
            out = replace(out, variant=Variant(variant) if isinstance(variant, str) else variant)
        if seed is not None:
            out = replace(out, seed=seed)
        return out

    def validate(self) -> None:
        wp = self.arena.waypoints
        if self.start_label not in wp:
            raise ScenarioError(f"start label {self.start_label!r} not on the map")
        missing = [w for w in self.waypoint_labels if w not in wp]
        if missing:
            raise ScenarioError(f"waypoints not on the map: {missing}")
        if not self.waypoint_labels:
            raise ScenarioError("at least one waypoint required")
        grid = self.arena.grid
        legs = [self.start_label] + list(self.waypoint_labels)
        for a, b in zip(legs, legs[1:]):
            if plan(grid.cells, grid.resolution, wp[a], wp[b]) is None:
                raise ScenarioError(f"waypoint {b!r} unreachable from {a!r} on the true map")

    def resolve_schedules(
        self, rng: np.random.Generator
    ) -> tuple[NoiseSchedule, DistractionSchedule]:
        """Fix the degradation intervals for one trial.

        Draws are consumed in a constant order so a seed fully determines
        placement regardless of controller variant.
        """
        n = self.noise
        d = self.distraction
        if n.mode == "fixed":
            noise = NoiseSchedule(n.start_s, n.end_s, n.phantom_rate)
        elif n.mode == "random-overlap":
            lo = n.place_min_s
            hi = max(lo, n.place_max_s - n.duration_s)
            start = float(rng.uniform(lo, hi))
            noise = NoiseSchedule(start, start + n.duration_s, n.phantom_rate)
        elif n.mode == "none":
            noise = NO_NOISE
        else:
            raise ScenarioError(f"unknown noise mode {n.mode!r}")

        if d.mode == "fixed":
            dist = DistractionSchedule(
                d.start_s, d.end_s, d.head_turn_yaw, d.item_period_s, d.transition_s, d.jitter_deg
            )
        elif d.mode == "random":
            if n.mode != "random-overlap":
                raise ScenarioError("distraction mode 'random' requires noise mode 'random-overlap'")
            slack = noise.end - noise.start - d.duration_s
            if slack < 0:
                raise ScenarioError("distraction longer than the noise window")
            start = float(rng.uniform(noise.start, noise.start + slack))
            dist = DistractionSchedule(
                start, start + d.duration_s, d.head_turn_yaw, d.item_period_s,
                d.transition_s, d.jitter_deg,
            )
        elif d.mode == "none":
            dist = NO_DISTRACTION
        else:
            raise ScenarioError(f"unknown distraction mode {d.mode!r}")
        if d.mode != "none" and n.mode == "random-overlap":
            assert noise.start <= dist.start and dist.end <= noise.end, "overlap guarantee broken"
        return noise, dist


def _section(data: dict, key: str) -> dict:
    val = data.get(key) or {}
    if not isinstance(val, dict):
        raise ScenarioError(f"section {key!r} must be a mapping")
    return val


def load_scenario(
    path, variant: Variant | str | None = None, seed: int | None = None
) -> Scenario:
    path = Path(path)
    with open(path, "r", encoding="utf-8") as f:
        data = yaml.safe_load(f)
    if not isinstance(data, dict):
        raise ScenarioError("scenario file must be a YAML mapping")
    try:
        map_path = (path.parent / data["map"]).resolve()
        arena = load_map(map_path, float(data.get("resolution", 0.25)))
        lim = _section(data, "limits")
        laser = _section(data, "laser")
        noise = _section(data, "noise")
        dist = _section(data, "distraction")
        op = _section(data, "operator")
        att = _section(data, "attention")
        ctl = _section(data, "controller")
        fol = _section(data, "follower")
        scenario = Scenario(
            name=str(data.get("name", path.stem)),
            map_path=map_path,
            arena=arena,
            start_label=str(data["start"]),
            waypoint_labels=[str(w) for w in data["waypoints"]],
            variant=Variant(str(data.get("variant", "caa-mi"))),
            seed=int(data.get("seed", 0)),
            dt=float(data.get("dt", 0.1)),
            timeout_s=float(data.get("timeout_s", 600.0)),
            waypoint_radius=float(data.get("waypoint_radius", 0.5)),
            initial_heading=float(data.get("initial_heading", 0.0)),
            teleop_hold_s=float(data.get("teleop_hold_s", 0.3)),
            belief_decay_s=float(data.get("belief_decay_s", 2.0)),
            limits=KinematicLimits(
                v_max=float(lim.get("v_max", 1.0)),
                omega_max=float(lim.get("omega_max", math.pi)),
            ),
            laser=LaserConfig(
                n_beams=int(laser.get("n_beams", 72)),
                max_range=float(laser.get("max_range", 5.0)),
                phantom_min=float(laser.get("phantom_min", 0.5)),
            ),
            noise=NoiseConfig(
                mode=str(noise.get("mode", "none")),
                phantom_rate=float(noise.get("phantom_rate", 0.08)),
                start_s=float(noise.get("start_s", 0.0)),
                end_s=float(noise.get("end_s", 0.0)),
                duration_s=float(noise.get("duration_s", 60.0)),
                place_min_s=float(noise.get("place_min_s", 20.0)),
                place_max_s=float(noise.get("place_max_s", 120.0)),
            ),
            distraction=DistractionConfig(
                mode=str(dist.get("mode", "none")),
                start_s=float(dist.get("start_s", 0.0)),
                end_s=float(dist.get("end_s", 0.0)),
                duration_s=float(dist.get("duration_s", 30.0)),
                head_turn_yaw=float(dist.get("head_turn_yaw", 60.0)),
                item_period_s=float(dist.get("item_period_s", 4.0)),
                transition_s=float(dist.get("transition_s", 0.3)),
                jitter_deg=float(dist.get("jitter_deg", 2.0)),
            ),
            operator=OperatorProfile(
                teleop_skill=float(op.get("teleop_skill", 0.85)),
                steering_noise=float(op.get("steering_noise", 0.1)),
                reaction_delay=float(op.get("reaction_delay", 0.4)),
                patience=float(op.get("patience", 4.0)),
                stall_dist=float(op.get("stall_dist", 0.2)),
            ),
            attention=AttentionParams(
                alpha=float(att.get("alpha", 0.2)),
                attend_band=float(att.get("attend_band", 15.0)),
                away_band=float(att.get("away_band", 30.0)),
                dropout_grace=float(att.get("dropout_grace", 0.5)),
            ),
            controller=ControllerParams(
                error_low=float(ctl.get("error_low", 0.1)),
                error_high=float(ctl.get("error_high", 0.3)),
                speed_low=float(ctl.get("speed_low", 0.1)),
                speed_high=float(ctl.get("speed_high", 0.3)),
                window_s=float(ctl.get("window_s", 5.0)),
                cooldown_s=float(ctl.get("cooldown_s", 3.0)),
                activation=float(ctl.get("activation", 0.5)),
            ),
            follower=FollowerParams(
                lookahead=float(fol.get("lookahead", 0.75)),
                decel_radius=float(fol.get("decel_radius", 1.5)),
                goal_tol=float(fol.get("goal_tol", 0.15)),
                v_min=float(fol.get("v_min", 0.05)),
                k_ang=float(fol.get("k_ang", 2.5)),
            ),
            rule_base=(
                RuleBase.load((path.parent / data["rules"]).resolve()) if data.get("rules") else None
            ),
        )
    except KeyError as e:
        raise ScenarioError(f"scenario missing required key: {e}") from e
    if variant is not None:
        scenario.variant = Variant(variant) if isinstance(variant, str) else variant
    if seed is not None:
        scenario.seed = seed
    scenario.validate()
    return scenario
