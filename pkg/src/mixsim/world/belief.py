"""Belief map: the true arena layout plus transient phantom obstacles.

The static layer (the known arena walls) is never modified. Scan endpoints
on statically free cells become phantom obstacles; a phantom reverts to
free once its cell has been continuously observed free (beams passing
through, no occupied sightings) for ``decay_s``, so noise-injected
obstacles do not lock the planner out permanently.
"""

import numpy as np

from .. import kernels
from .grid import Cell, OccupancyGrid
from .robot import RobotState
from .sensor import LaserScan


class BeliefMap:
    def __init__(self, true_grid: OccupancyGrid, decay_s: float = 2.0):
        self.resolution = true_grid.resolution
        self.static = true_grid.cells.copy()
        self.phantom = np.zeros_like(self.static)
        self._first_free = np.full(self.static.shape, -1.0, dtype=np.float64)
        self.decay_s = decay_s

    def occupancy(self) -> np.ndarray:
        """Combined occupancy layer (shared dtype with OccupancyGrid.cells)."""
        return self.static | self.phantom

    def grid(self) -> OccupancyGrid:
        return OccupancyGrid(self.resolution, self.occupancy())

    def integrate(self, scan: LaserScan, state: RobotState) -> None:
        kernels.integrate_scan(
            self.static,
            self.phantom,
            self._first_free,
            scan.t,
            state.x,
            state.y,
            state.heading,
            scan.bearings,
            scan.ranges,
            scan.hits.astype(np.uint8),
            self.decay_s,
            self.resolution,
        )

    def clear_cell(self, cell: Cell) -> None:
        """Drop any phantom at *cell* (used to keep the planner's start free)."""
        self.phantom[cell[0], cell[1]] = 0

    def phantom_count(self) -> int:
        return int(self.phantom.sum())
