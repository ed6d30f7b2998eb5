"""Occupancy grid and the plain-text arena map format.

Map files use one character per cell, one row per line:
``#`` occupied, ``.`` free, ``A``-``Z`` a labelled waypoint on a free cell.
Row 0 is the first line; world coordinates put x along columns and y along
rows, so cell (r, c) spans ``[c*res, (c+1)*res) x [r*res, (r+1)*res)``.
"""

from dataclasses import dataclass, field

import numpy as np

FREE = 0
OCCUPIED = 1

Cell = tuple[int, int]


class MapFormatError(ValueError):
    """Raised for malformed arena map text."""


@dataclass
class OccupancyGrid:
    resolution: float
    cells: np.ndarray  # uint8 (height, width); nonzero = occupied

    @property
    def height_cells(self) -> int:
        return self.cells.shape[0]

    @property
    def width_cells(self) -> int:
        return self.cells.shape[1]

    @property
    def width_m(self) -> float:
        return self.width_cells * self.resolution

    @property
    def height_m(self) -> float:
        return self.height_cells * self.resolution

    def in_bounds(self, cell: Cell) -> bool:
        r, c = cell
        return 0 <= r < self.height_cells and 0 <= c < self.width_cells

    def is_free(self, cell: Cell) -> bool:
        return self.in_bounds(cell) and self.cells[cell[0], cell[1]] == FREE

    def cell_of(self, x: float, y: float) -> Cell:
        return int(y / self.resolution), int(x / self.resolution)

    def cell_center(self, cell: Cell) -> tuple[float, float]:
        r, c = cell
        return (c + 0.5) * self.resolution, (r + 0.5) * self.resolution

    def copy(self) -> "OccupancyGrid":
        return OccupancyGrid(self.resolution, self.cells.copy())


@dataclass
class ArenaMap:
    """A parsed map file: the true grid plus labelled waypoints."""

    grid: OccupancyGrid
    waypoints: dict[str, Cell] = field(default_factory=dict)


def parse_map_text(text: str, resolution: float = 0.25) -> ArenaMap:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MapFormatError("empty map")
    width = len(lines[0])
    if any(len(ln) != width for ln in lines):
        raise MapFormatError("ragged map rows")
    height = len(lines)
    cells = np.zeros((height, width), dtype=np.uint8)
    waypoints: dict[str, Cell] = {}
    for r, line in enumerate(lines):
        for c, ch in enumerate(line):
            if ch == "#":
                cells[r, c] = OCCUPIED
            elif ch == ".":
                pass
            elif "A" <= ch <= "Z":
                if ch in waypoints:
                    raise MapFormatError(f"duplicate waypoint label {ch!r}")
                waypoints[ch] = (r, c)
            else:
                raise MapFormatError(f"unknown map character {ch!r} at row {r}, col {c}")
    border_ok = (
        cells[0, :].all() and cells[-1, :].all() and cells[:, 0].all() and cells[:, -1].all()
    )
    if not border_ok:
        raise MapFormatError("all border cells must be occupied ('#')")
    return ArenaMap(OccupancyGrid(resolution, cells), waypoints)


def load_map(path, resolution: float = 0.25) -> ArenaMap:
    with open(path, "r", encoding="utf-8") as f:
        return parse_map_text(f.read(), resolution)


def map_to_text(arena: ArenaMap) -> str:
    grid = arena.grid
    rows = []
    labels = {cell: lab for lab, cell in arena.waypoints.items()}
    for r in range(grid.height_cells):
        chars = []
        for c in range(grid.width_cells):
            if grid.cells[r, c] != FREE:
                chars.append("#")
            else:
                chars.append(labels.get((r, c), "."))
        rows.append("".join(chars))
    return "\n".join(rows) + "\n"


def empty_arena(side_m: float = 24.0, resolution: float = 0.25) -> OccupancyGrid:
    """Walled, otherwise empty square arena (default matches the 24 m side)."""
    n = round(side_m / resolution)
    cells = np.zeros((n, n), dtype=np.uint8)
    cells[0, :] = OCCUPIED
    cells[-1, :] = OCCUPIED
    cells[:, 0] = OCCUPIED
    cells[:, -1] = OCCUPIED
    return OccupancyGrid(resolution, cells)
