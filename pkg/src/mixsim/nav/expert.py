"""Expert navigation oracle: expected performance on the idealized map.

The expert runs the same planner and follower as the autonomy mode, but on
the noise-free true grid, re-evaluated from the robot's actual pose every
tick. Its commanded speed is the reference against which the controller's
goal-directed motion error is computed; because the ideal map has no
phantom obstacles, the expert is an upper bound on achievable performance.
"""

from dataclasses import dataclass

from ..world.grid import Cell, OccupancyGrid
from ..world.robot import KinematicLimits, RobotState
from .follower import FollowerParams, follow
from .planner import Path, plan, taut_length


class UnreachableGoalError(RuntimeError):
    """The goal cannot be reached even on the idealized map (scenario error)."""


@dataclass(frozen=True)
class ExpertProfile:
    expected_speed: float
    remaining_length: float  # grid-path meters from the current pose


class ExpertOracle:
    def __init__(
        self,
        ideal_grid: OccupancyGrid,
        limits: KinematicLimits = KinematicLimits(),
        params: FollowerParams = FollowerParams(),
    ):
        self.grid = ideal_grid
        self.limits = limits
        self.params = params
        self._cache: dict[tuple[Cell, Cell], Path] = {}

    def _plan_from(self, cell: Cell, goal: Cell) -> Path:
        key = (cell, goal)
        path = self._cache.get(key)
        if path is None:
            path = plan(self.grid.cells, self.grid.resolution, cell, goal)
            if path is None:
                raise UnreachableGoalError(f"goal {goal} unreachable from {cell} on ideal map")
            self._cache[key] = path
        return path

    def expected(self, state: RobotState, goal: Cell | None) -> ExpertProfile:
        """Expert speed command and remaining path length for the current tick."""
        if goal is None:
            return ExpertProfile(0.0, 0.0)
        cell = self.grid.cell_of(state.x, state.y)
        if cell == goal:
            return ExpertProfile(0.0, 0.0)
        path = self._plan_from(cell, goal)
        cmd, reached = follow(path, state, self.limits, self.params)
        if reached:
            return ExpertProfile(0.0, 0.0)
        s_here, _ = path.progress(state.x, state.y)
        return ExpertProfile(cmd.linear, max(0.0, path.length - s_here))

    def leg_lower_bound(self, state: RobotState, goal: Cell) -> float:
        """String-pulled route length from the pose to the goal on the ideal map.

        A realizable route, hence a sound yardstick for the dominance check:
        any actual trajectory that reaches the goal travels at least roughly
        this far (see the harness's per-leg bookkeeping).
        """
        cell = self.grid.cell_of(state.x, state.y)
        if cell == goal:
            return 0.0
        path = self._plan_from(cell, goal)
        return taut_length(self.grid.cells, path, (state.x, state.y))
