"""Batch Monte-Carlo runs: paired seeds across controller variants.

Every variant runs the same seed list, so degradation placement is matched
pairwise (the within-groups analogue). Trials are independent and may run
in parallel worker processes; results are joined in (variant, seed) order,
keeping reports deterministic regardless of worker scheduling.
"""

import os
from dataclasses import dataclass, replace
from multiprocessing import get_context

import numpy as np

from ..control.controller import Variant
from .report import command_log_rows, decision_log_rows, metrics_record, write_jsonl
from .scenario import Scenario
from .trial import RunMetrics, run_trial

AGGREGATE_METRICS = [
    "completion_time",
    "switches_total",
    "switches_ai",
    "switches_human",
    "ai_auto_to_teleop_while_away",
    "time_teleop",
    "time_autonomy",
    "collisions",
    "odometry",
    "secondary_presented",
    "secondary_completed",
    "secondary_interruptions",
]


@dataclass
class BatchResult:
    scenario_name: str
    variants: list[str]
    seeds: list[int]
    metrics: dict[tuple[str, int], RunMetrics]
    waypoint_radius: float
    failures: dict[tuple[str, int], str]

    def records(self) -> list[dict]:
        out = []
        for variant in self.variants:
            for seed in self.seeds:
                m = self.metrics.get((variant, seed))
                if m is not None:
                    out.append(metrics_record(m, self.waypoint_radius))
        return out

    def per_variant(self, variant: str) -> list[RunMetrics]:
        return [self.metrics[(variant, s)] for s in self.seeds if (variant, s) in self.metrics]

    def aggregate(self) -> dict[str, dict[str, tuple[float, float]]]:
        records = {v: [metrics_record(m, self.waypoint_radius) for m in self.per_variant(v)]
                   for v in self.variants}
        out: dict[str, dict[str, tuple[float, float]]] = {}
        for variant, recs in records.items():
            stats: dict[str, tuple[float, float]] = {}
            for metric in AGGREGATE_METRICS:
                vals = np.asarray([float(r[metric]) for r in recs], dtype=np.float64)
                if len(vals) == 0:
                    stats[metric] = (float("nan"), float("nan"))
                elif len(vals) == 1:
                    stats[metric] = (float(vals[0]), 0.0)
                else:
                    stats[metric] = (float(vals.mean()), float(vals.std(ddof=1)))
            out[variant] = stats
        return out


def _run_one(args) -> tuple[tuple[str, int], RunMetrics | None, str | None]:
    scenario, log_dir = args
    key = (scenario.variant.value, scenario.seed)
    try:
        metrics, runner = run_trial(scenario, collect_log=log_dir is not None)
        if log_dir is not None:
            stem = f"{scenario.variant.value}_seed{scenario.seed:04d}"
            write_jsonl(log_dir / f"{stem}_decision.jsonl", decision_log_rows(runner))
            write_jsonl(log_dir / f"{stem}_commands.jsonl", command_log_rows(runner))
        return key, metrics, None
    except Exception as e:  # propagate per-trial failures without killing the batch
        return key, None, f"{type(e).__name__}: {e}"


def run_batch(
    scenario: Scenario,
    variants: list[Variant | str],
    n_runs: int,
    seed_base: int = 0,
    jobs: int | None = None,
    log_dir=None,
) -> BatchResult:
    if n_runs < 1:
        raise ValueError("n_runs must be >= 1")
    variants = [Variant(v) if isinstance(v, str) else v for v in variants]
    seeds = list(range(seed_base, seed_base + n_runs))
    tasks = [
        (replace(scenario, variant=v, seed=s), log_dir)
        for v in variants
        for s in seeds
    ]
    if jobs is None:
        jobs = os.cpu_count() or 1
    jobs = max(1, min(jobs, len(tasks)))
    if jobs == 1:
        results = [_run_one(task) for task in tasks]
    else:
        with get_context("fork").Pool(jobs) as pool:
            results = pool.map(_run_one, tasks, chunksize=1)
    metrics: dict[tuple[str, int], RunMetrics] = {}
    failures: dict[tuple[str, int], str] = {}
    for key, m, err in results:
        if m is not None:
            metrics[key] = m
        else:
            failures[key] = err
    return BatchResult(
        scenario_name=scenario.name,
        variants=[v.value for v in variants],
        seeds=seeds,
        metrics=metrics,
        waypoint_radius=scenario.waypoint_radius,
        failures=failures,
    )
