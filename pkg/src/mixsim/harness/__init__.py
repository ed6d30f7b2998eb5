from .batch import BatchResult, run_batch
from .scenario import (
    AttentionParams,
    DistractionConfig,
    NoiseConfig,
    Scenario,
    ScenarioError,
    load_scenario,
)
from .trial import (
    CommandLogDriver,
    LegRecord,
    RunMetrics,
    ScriptedDriver,
    TelemetrySnapshot,
    TrialRunner,
    run_trial,
)

__all__ = [
    "AttentionParams",
    "BatchResult",
    "CommandLogDriver",
    "DistractionConfig",
    "LegRecord",
    "NoiseConfig",
    "RunMetrics",
    "Scenario",
    "ScenarioError",
    "ScriptedDriver",
    "TelemetrySnapshot",
    "TrialRunner",
    "load_scenario",
    "run_batch",
    "run_trial",
]
