import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mixsim.world import OccupancyGrid, empty_arena  # noqa: E402

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"


@pytest.fixture
def arena10() -> OccupancyGrid:
    """Walled 10x10-cell arena at 0.25 m resolution."""
    return empty_arena(side_m=2.5, resolution=0.25)


@pytest.fixture
def arena24() -> OccupancyGrid:
    return empty_arena(side_m=24.0, resolution=0.25)


def random_grid(rng: np.random.Generator, h: int, w: int, density: float) -> np.ndarray:
    occ = (rng.random((h, w)) < density).astype(np.uint8)
    occ[0, :] = 1
    occ[-1, :] = 1
    occ[:, 0] = 1
    occ[:, -1] = 1
    return occ
