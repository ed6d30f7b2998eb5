from .belief import BeliefMap
from .grid import (
    FREE,
    OCCUPIED,
    ArenaMap,
    Cell,
    MapFormatError,
    OccupancyGrid,
    empty_arena,
    load_map,
    map_to_text,
    parse_map_text,
)
from .robot import (
    STOP,
    KinematicLimits,
    LoaMode,
    RobotState,
    VelocityCommand,
    step,
    wrap_angle,
)
from .sensor import NO_NOISE, LaserConfig, LaserScan, NoiseSchedule, sense

__all__ = [
    "ArenaMap",
    "BeliefMap",
    "Cell",
    "FREE",
    "KinematicLimits",
    "LaserConfig",
    "LaserScan",
    "LoaMode",
    "MapFormatError",
    "NO_NOISE",
    "NoiseSchedule",
    "OCCUPIED",
    "OccupancyGrid",
    "RobotState",
    "STOP",
    "VelocityCommand",
    "empty_arena",
    "load_map",
    "map_to_text",
    "parse_map_text",
    "sense",
    "step",
    "wrap_angle",
]
