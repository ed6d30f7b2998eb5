from .expert import ExpertOracle, ExpertProfile, UnreachableGoalError
from .follower import FollowerParams, follow
from .planner import Path, line_of_sight, path_blocked, plan, replan_if_blocked, taut_length

__all__ = [
    "ExpertOracle",
    "ExpertProfile",
    "FollowerParams",
    "Path",
    "UnreachableGoalError",
    "follow",
    "line_of_sight",
    "path_blocked",
    "plan",
    "replan_if_blocked",
    "taut_length",
]
