"""Shared builders for harness-level tests."""

from pathlib import Path

from mixsim.harness.scenario import (
    DistractionConfig,
    NoiseConfig,
    Scenario,
)
from mixsim.operator_model import OperatorProfile
from mixsim.world.grid import parse_map_text

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"


def corridor_scenario(
    length_m: float = 8.0,
    variant: str = "teleop",
    skill: float = 0.8,
    seed: int = 0,
) -> Scenario:
    """Straight walled corridor with start A and goal B length_m apart."""
    res = 0.25
    cols = int(length_m / res) + 16
    rows = 10
    lines = []
    for r in range(rows):
        if r in (0, rows - 1):
            lines.append("#" * cols)
        else:
            lines.append("#" + "." * (cols - 2) + "#")
    text = "\n".join(lines)
    arena = parse_map_text(text, res)
    a = (rows // 2, 6)
    b = (rows // 2, 6 + int(length_m / res))
    arena.waypoints["A"] = a
    arena.waypoints["B"] = b
    sc = Scenario(
        name="corridor",
        map_path=Path("corridor.txt"),
        arena=arena,
        start_label="A",
        waypoint_labels=["B"],
        seed=seed,
        noise=NoiseConfig(mode="none"),
        distraction=DistractionConfig(mode="none"),
        operator=OperatorProfile(teleop_skill=skill, steering_noise=0.05),
    )
    return sc.with_overrides(variant=variant)
