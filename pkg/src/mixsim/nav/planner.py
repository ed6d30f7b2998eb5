"""Grid path planning for the autonomy mode.

plan() produces cost-optimal 8-connected paths (straight step = resolution,
diagonal = resolution*sqrt(2), octile heuristic). Ties between equal-cost
paths are broken by the fixed neighbour expansion order E, NE, N, NW, W,
SW, S, SE, so planning is fully reproducible.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .. import kernels
from ..world.grid import Cell
from ..world.robot import RobotState


@dataclass
class Path:
    """An 8-connected cell path with precomputed polyline geometry."""

    cells: list[Cell]
    length: float
    resolution: float
    xs: np.ndarray = field(repr=False, default=None)
    ys: np.ndarray = field(repr=False, default=None)
    cum: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self.xs is None:
            rc = np.asarray(self.cells, dtype=np.float64)
            self.xs = (rc[:, 1] + 0.5) * self.resolution
            self.ys = (rc[:, 0] + 0.5) * self.resolution
            seg = np.hypot(np.diff(self.xs), np.diff(self.ys))
            self.cum = np.concatenate(([0.0], np.cumsum(seg)))

    @property
    def goal(self) -> Cell:
        return self.cells[-1]

    def progress(self, x: float, y: float) -> tuple[float, float]:
        """(arc length of closest point, distance to path) for a world point."""
        s, d = kernels.polyline_progress(self.xs, self.ys, self.cum, x, y)
        return float(s), float(d)

    def point_at(self, s: float) -> tuple[float, float]:
        """World point at arc length s (clamped to the ends)."""
        if s <= 0.0:
            return float(self.xs[0]), float(self.ys[0])
        if s >= self.cum[-1]:
            return float(self.xs[-1]), float(self.ys[-1])
        i = int(np.searchsorted(self.cum, s, side="right")) - 1
        seg = self.cum[i + 1] - self.cum[i]
        u = (s - self.cum[i]) / seg if seg > 0 else 0.0
        return (
            float(self.xs[i] + u * (self.xs[i + 1] - self.xs[i])),
            float(self.ys[i] + u * (self.ys[i + 1] - self.ys[i])),
        )


def dilate_occupancy(occ: np.ndarray, robot_cell: Cell | None = None, goal_cell: Cell | None = None) -> np.ndarray:
    """Inflate obstacles by one cell so planned paths keep wall clearance.

    Pure pursuit cuts corners by up to lookahead/(2*sqrt(2)) ~ 0.27 m, so a
    0.25 m margin keeps the cut line collision free. The robot's own cell
    (with its neighbourhood) and the goal cell are carved back out so a
    wall-hugging robot can always plan its way free.
    """
    d = occ.copy()
    d[:-1, :] |= occ[1:, :]
    d[1:, :] |= occ[:-1, :]
    d[:, :-1] |= occ[:, 1:]
    d[:, 1:] |= occ[:, :-1]
    d[:-1, :-1] |= occ[1:, 1:]
    d[1:, 1:] |= occ[:-1, :-1]
    d[:-1, 1:] |= occ[1:, :-1]
    d[1:, :-1] |= occ[:-1, 1:]
    h, w = occ.shape
    for cell in (robot_cell, goal_cell):
        if cell is None:
            continue
        r0, r1 = max(cell[0] - 1, 0), min(cell[0] + 2, h)
        c0, c1 = max(cell[1] - 1, 0), min(cell[1] + 2, w)
        region = d[r0:r1, c0:c1]
        region[occ[r0:r1, c0:c1] == 0] = 0
    return d


def plan(occ: np.ndarray, resolution: float, start: Cell, goal: Cell) -> Path | None:
    """Optimal path from start to goal on the given occupancy layer.

    Returns None when the goal is unreachable; callers must surface that
    (the harness treats it as a stall, scenario validation as an error).
    """
    cells, cost = kernels.astar(occ, start[0], start[1], goal[0], goal[1], resolution)
    if cost < 0.0:
        return None
    return Path([(int(r), int(c)) for r, c in cells], float(cost), resolution)


def path_blocked(occ: np.ndarray, path: Path, state: RobotState, horizon_m: float = 2.0) -> bool:
    """True if any path cell within horizon_m ahead of the robot is occupied."""
    s_here, _ = path.progress(state.x, state.y)
    for i, (r, c) in enumerate(path.cells):
        if path.cum[i] < s_here - 1e-9:
            continue
        if path.cum[i] > s_here + horizon_m:
            break
        if occ[r, c] != 0:
            return True
    return False


def replan_if_blocked(
    occ: np.ndarray,
    path: Path,
    state: RobotState,
    resolution: float,
    horizon_m: float = 2.0,
) -> Path | None:
    """Re-plan from the robot's cell when the path ahead is blocked.

    Returns the original path object untouched when it is clear; None when
    no alternative exists in the current belief.
    """
    if not path_blocked(occ, path, state, horizon_m):
        return path
    start = (int(state.y / resolution), int(state.x / resolution))
    return plan(occ, resolution, start, path.goal)


def line_of_sight(occ: np.ndarray, resolution: float, a: tuple, b: tuple) -> bool:
    """Conservative world-coordinate visibility check between two points.

    Samples the segment at quarter-cell steps; any occupied sample blocks.
    """
    ax, ay = a
    bx, by = b
    dist = math.hypot(bx - ax, by - ay)
    n = max(2, int(dist / (0.25 * resolution)) + 1)
    h, w = occ.shape
    for i in range(n + 1):
        u = i / n
        x = ax + u * (bx - ax)
        y = ay + u * (by - ay)
        r = int(y / resolution)
        c = int(x / resolution)
        if r < 0 or r >= h or c < 0 or c >= w or occ[r, c] != 0:
            return False
    return True


def taut_length(occ: np.ndarray, path: Path, from_xy: tuple | None = None) -> float:
    """Length of the string-pulled polyline along *path*.

    Greedy line-of-sight shortcutting from the current position through the
    path vertices; the result is a realizable route, so it tightens the
    grid path's octile overestimate of the true shortest route. Used for
    the expert-versus-odometry dominance bookkeeping.
    """
    pts = [(float(x), float(y)) for x, y in zip(path.xs, path.ys)]
    if from_xy is not None:
        s_here, _ = path.progress(*from_xy)
        i0 = int(np.searchsorted(path.cum, s_here, side="left"))
        pts = [from_xy] + pts[i0:]
    if len(pts) < 2:
        return 0.0
    total = 0.0
    i = 0
    while i < len(pts) - 1:
        j = len(pts) - 1
        while j > i + 1 and not line_of_sight(occ, path.resolution, pts[i], pts[j]):
            j -= 1
        total += math.hypot(pts[j][0] - pts[i][0], pts[j][1] - pts[i][1])
        i = j
    return total
