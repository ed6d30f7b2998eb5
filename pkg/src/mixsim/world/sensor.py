"""Simulated laser range finder with scheduled phantom-return noise.

The noise stand-in shortens individual beams to a uniform-random distance
while the schedule is active, which plants phantom obstacles in the belief
map and thereby degrades autonomous navigation. Outside the active window
the scan is a pure function of geometry.
"""

from dataclasses import dataclass

import numpy as np

from .. import kernels
from .grid import OccupancyGrid
from .robot import RobotState


@dataclass(frozen=True)
class LaserConfig:
    n_beams: int = 72
    max_range: float = 5.0
    phantom_min: float = 0.5  # > cell diagonal, so a phantom never lands on the robot's cell

    def bearings(self) -> np.ndarray:
        return -np.pi + 2.0 * np.pi * np.arange(self.n_beams) / self.n_beams


@dataclass(frozen=True)
class NoiseSchedule:
    start: float
    end: float
    phantom_rate: float

    def __post_init__(self):
        if not self.start < self.end:
            raise ValueError("noise interval must have start < end")
        if not 0.0 <= self.phantom_rate <= 1.0:
            raise ValueError("phantom_rate must be in [0, 1]")

    def active(self, t: float) -> bool:
        return self.start <= t < self.end


NO_NOISE = NoiseSchedule(0.0, 1e-9, 0.0)


@dataclass
class LaserScan:
    t: float
    bearings: np.ndarray  # robot-relative radians
    ranges: np.ndarray
    hits: np.ndarray  # bool: beam terminated on (real or phantom) obstacle


def sense(
    grid: OccupancyGrid,
    state: RobotState,
    noise: NoiseSchedule,
    t: float,
    rng: np.random.Generator,
    cfg: LaserConfig = LaserConfig(),
) -> LaserScan:
    """Ray-cast a full scan against the true grid, then inject phantoms.

    While the schedule is active each beam is independently shortened with
    probability phantom_rate to a uniform distance in [phantom_min, range).
    The random stream is consumed identically for every active scan, so a
    fixed seed reproduces the scan sequence exactly.
    """
    bearings = cfg.bearings()
    ranges = kernels.scan_ranges(
        grid.cells, state.x, state.y, state.heading, bearings, cfg.max_range, grid.resolution
    )
    hits = ranges < cfg.max_range - 1e-9
    if noise.active(t) and noise.phantom_rate > 0.0:
        u = rng.random(cfg.n_beams)
        frac = rng.random(cfg.n_beams)
        shorten = (u < noise.phantom_rate) & (ranges > cfg.phantom_min)
        shortened = cfg.phantom_min + frac * (ranges - cfg.phantom_min)
        ranges = np.where(shorten, shortened, ranges)
        hits = hits | shorten
    return LaserScan(t=t, bearings=bearings, ranges=ranges, hits=hits)
