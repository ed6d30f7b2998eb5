"""Acceptance suite: one test per release criterion, each printing a
PASS line (run with ``pytest tests/test_acceptance.py -v -s``).

The trial-trace criteria share a single 100-seed paired batch (MI and the
availability-aware controller on identical seeds with random overlapping
degradation windows), exactly the comparison design the harness exists
to support.
"""

import json
import math
import time
from dataclasses import replace

import numpy as np
import pytest

from mixsim.attention import ema_update
from mixsim.control import (
    ControllerParams,
    FuzzyInput,
    MixedInitiativeController,
    MotionErrorWindow,
    SWITCH,
    Variant,
    caa_mi_rule_base,
    infer,
    mi_rule_base,
)
from mixsim.harness import load_scenario, run_batch, run_trial
from mixsim.harness.report import (
    command_log_rows,
    decision_log_rows,
    metrics_record,
    write_jsonl,
    write_trials_csv,
)
from mixsim.nav.planner import plan
from mixsim.world import LoaMode

from conftest import SCENARIO_DIR, random_grid
from oracles import dijkstra_cost, trapezoid_mean

TELEOP = LoaMode.TELEOPERATION
AUTO = LoaMode.AUTONOMY

N_PAIRED = 100
BATCH_BUDGET_S = 300.0

DEGREES = [round(0.1 * i, 1) for i in range(11)]


def input_grid():
    for e in DEGREES:
        for a in DEGREES:
            for s in DEGREES:
                for loa in (TELEOP, AUTO):
                    yield FuzzyInput(e, a, loa, s)


@pytest.fixture(scope="session")
def paired_batch():
    scenario = load_scenario(SCENARIO_DIR / "baseline.yaml")
    t0 = time.perf_counter()
    result = run_batch(scenario, ["mi", "caa-mi"], n_runs=N_PAIRED, seed_base=0, jobs=None)
    elapsed = time.perf_counter() - t0
    assert not result.failures, f"failed trials: {result.failures}"
    return scenario, result, elapsed


def report(name: str) -> None:
    print(f"\n[ACCEPTANCE] {name}: PASS")


def test_rule_precedence_exhaustive():
    """Availability < 0.5 never yields a switch into teleoperation, and in
    teleoperation it always yields a switch into autonomy (2,662 points)."""
    base = caa_mi_rule_base()
    t0 = time.perf_counter()
    points = 0
    for fz in input_grid():
        decision = infer(base, fz)
        points += 1
        if fz.availability < 0.5:
            assert not (
                decision.action == SWITCH and decision.target is TELEOP
            ), f"interrupting switch at {fz}"
            if fz.loa is TELEOP:
                assert decision.action == SWITCH and decision.target is AUTO, (
                    f"missing autonomy handover at {fz}"
                )
    elapsed = time.perf_counter() - t0
    assert points == 2662
    assert elapsed < 1.0, f"sweep took {elapsed:.2f}s"
    report(f"rule precedence over {points} grid points in {elapsed * 1000:.0f} ms")


def test_variant_equivalence_on_full_grid():
    """With availability pinned to 1, both rule bases decide identically."""
    caa = caa_mi_rule_base()
    mi = mi_rule_base()
    mismatches = 0
    for fz in input_grid():
        pinned = FuzzyInput(fz.error_high, 1.0, fz.loa, fz.speed_low)
        a = infer(caa, pinned)
        b = infer(mi, pinned)
        if (a.action, a.target) != (b.action, b.target):
            mismatches += 1
    assert mismatches == 0
    report("variant equivalence at availability 1 (0 mismatches)")


def test_never_interrupt_trace_property(paired_batch):
    """Across 100 paired trials with overlapping degradation, the
    availability-aware controller never pulls a non-attending operator out
    of autonomy; the plain controller does so in at least half the seeds."""
    _, result, elapsed = paired_batch
    caa_violations = sum(m.ai_auto_to_teleop_while_away for m in result.per_variant("caa-mi"))
    assert caa_violations == 0
    mi_counts = [m.ai_auto_to_teleop_while_away for m in result.per_variant("mi")]
    frac = float(np.mean([c > 0 for c in mi_counts]))
    assert frac >= 0.5, f"plain controller interrupted in only {frac:.0%} of trials"
    assert elapsed < BATCH_BUDGET_S, f"batch took {elapsed:.0f}s (budget {BATCH_BUDGET_S:.0f}s)"
    report(
        f"never-interrupt: caa-mi 0 violations, mi interrupts in {frac:.0%} of trials, "
        f"batch {elapsed:.0f}s"
    )


def test_switch_count_trend(paired_batch):
    _, result, _ = paired_batch
    agg = result.aggregate()
    total_mi, total_caa = agg["mi"]["switches_total"][0], agg["caa-mi"]["switches_total"][0]
    ai_mi, ai_caa = agg["mi"]["switches_ai"][0], agg["caa-mi"]["switches_ai"][0]
    assert total_caa <= total_mi, f"total switches {total_caa:.2f} > {total_mi:.2f}"
    assert ai_caa <= ai_mi, f"AI switches {ai_caa:.2f} > {ai_mi:.2f}"
    report(
        f"switch trend: total {total_mi:.2f}->{total_caa:.2f}, AI {ai_mi:.2f}->{ai_caa:.2f}"
    )


def test_secondary_score_trend(paired_batch):
    _, result, _ = paired_batch
    agg = result.aggregate()
    sec_mi = agg["mi"]["secondary_completed"][0]
    sec_caa = agg["caa-mi"]["secondary_completed"][0]
    assert sec_caa >= sec_mi, f"secondary score {sec_caa:.2f} < {sec_mi:.2f}"
    report(f"secondary-score trend: {sec_mi:.2f}->{sec_caa:.2f}")


def test_planner_matches_uniform_cost_oracle():
    """500 random grids up to 12x12: plan() cost equals an independent
    uniform-cost search exactly (identical within 1e-9, which separates
    distinct octile path costs at these sizes)."""
    rng = np.random.default_rng(20240917)
    checked = 0
    while checked < 500:
        h, w = rng.integers(4, 13, 2)
        occ = random_grid(rng, int(h), int(w), float(rng.uniform(0.05, 0.4)))
        free = np.argwhere(occ == 0)
        if len(free) < 2:
            continue
        s = tuple(free[rng.integers(len(free))])
        g = tuple(free[rng.integers(len(free))])
        p = plan(occ, 0.25, s, g)
        oracle = dijkstra_cost(occ, s, g, 0.25)
        if oracle is None:
            assert p is None
        else:
            assert p is not None
            assert abs(p.length - oracle) < 1e-9
        checked += 1
    report("planner cost == uniform-cost oracle on 500 random grids")


def test_ema_closed_form_and_bounds():
    y = 0.0
    for _ in range(10):
        y = ema_update(y, 45.0, 0.2)
    closed = 45.0 * (1.0 - 0.8**10)
    closed_err = abs(y - closed)
    assert closed_err < 1e-9
    rng = np.random.default_rng(7)
    for _ in range(1000):
        n = int(rng.integers(2, 60))
        alpha = float(rng.uniform(0.01, 1.0))
        yaws = rng.uniform(-90, 90, n)
        y = yaws[0]
        lo = hi = yaws[0]
        for yaw in yaws[1:]:
            y = ema_update(y, float(yaw), alpha)
            lo, hi = min(lo, yaw), max(hi, yaw)
            assert lo - 1e-9 <= y <= hi + 1e-9
    report(f"EMA closed form (|err|={closed_err:.1e}) and bounds on 1000 traces")


def test_error_window_oracle_and_reset():
    rng = np.random.default_rng(11)
    for _ in range(50):
        w = MotionErrorWindow(5.0)
        ts, errs = [], []
        mean = 0.0
        for k in range(rng.integers(60, 140)):
            t = 0.1 * k
            expert = float(rng.uniform(0, 1))
            actual = float(rng.uniform(0, 1))
            mean = w.push(t, expert, actual)
            ts.append(t)
            errs.append(max(0.0, expert - actual))
        kept = [(t, e) for t, e in zip(ts, errs) if t >= ts[-1] - 5.0 - 1e-9]
        oracle = trapezoid_mean([t for t, _ in kept], [e for _, e in kept])
        assert abs(mean - oracle) < 1e-9
    # reset after every switch
    ctrl = MixedInitiativeController(Variant.MI, ControllerParams())
    post_switch = None
    for k in range(60):
        r = ctrl.update(0.1 * k, 1.0, 0.0, 1.0, AUTO)
        if r.switch is not None:
            post_switch = ctrl.update(0.1 * (k + 1), 1.0, 0.0, 1.0, TELEOP)
            break
    assert post_switch is not None and post_switch.mean_error == 0.0
    report("error window matches trapezoid oracle (1e-9); resets after switches")


def test_expert_dominance_over_all_completed_legs(paired_batch):
    scenario, result, _ = paired_batch
    legs_checked = 0
    for variant in result.variants:
        for m in result.per_variant(variant):
            for leg in m.legs:
                if leg.completed:
                    legs_checked += 1
                    assert (
                        leg.odometry + scenario.waypoint_radius + 1e-6 >= leg.expert_bound
                    ), f"{variant} seed {m.seed} leg {leg.label}: {leg.odometry:.3f} < {leg.expert_bound:.3f}"
    assert legs_checked > 0
    report(f"expert dominance on {legs_checked} completed legs")


def test_determinism_byte_identical(tmp_path):
    scenario = load_scenario(SCENARIO_DIR / "baseline.yaml", variant="caa-mi", seed=13)
    blobs = []
    for name in ("first", "second"):
        d = tmp_path / name
        metrics, runner = run_trial(scenario)
        write_jsonl(d / "decision_log.jsonl", decision_log_rows(runner))
        write_jsonl(d / "command_log.jsonl", command_log_rows(runner))
        write_trials_csv(d / "trial.csv", [metrics_record(metrics, scenario.waypoint_radius)])
        blobs.append(
            tuple(
                (d / f).read_bytes()
                for f in ("decision_log.jsonl", "command_log.jsonl", "trial.csv")
            )
        )
    assert blobs[0] == blobs[1]
    report("determinism: identical scenario+seed -> byte-identical logs and reports, twice")
