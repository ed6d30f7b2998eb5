"""Trial/batch artifacts: decision logs, command logs, CSV and summary files.

Files are byte-reproducible for a given scenario and seed list: no wall
clock, no environment-dependent content, fixed key and column order, and
floats serialized with repr round-tripping.
"""

import csv
import json
from pathlib import Path

from .trial import RunMetrics, TrialRunner

TRIAL_COLUMNS = [
    "variant",
    "seed",
    "completed",
    "reason",
    "completion_time",
    "ticks",
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
    "dominance_ok",
    "noise_start",
    "noise_end",
    "distraction_start",
    "distraction_end",
]


def metrics_record(m: RunMetrics, waypoint_radius: float) -> dict:
    return {
        "variant": m.variant,
        "seed": m.seed,
        "completed": m.completed,
        "reason": m.reason,
        "completion_time": round(m.completion_time, 6),
        "ticks": m.ticks,
        "switches_total": m.switches_total,
        "switches_ai": m.switches_ai,
        "switches_human": m.switches_human,
        "ai_auto_to_teleop_while_away": m.ai_auto_to_teleop_while_away,
        "time_teleop": round(m.time_teleop, 6),
        "time_autonomy": round(m.time_autonomy, 6),
        "collisions": m.collisions,
        "odometry": round(m.odometry, 6),
        "secondary_presented": m.secondary.presented,
        "secondary_completed": m.secondary.completed,
        "secondary_interruptions": m.secondary.interruptions,
        "dominance_ok": m.dominance_ok(waypoint_radius),
        "noise_start": round(m.noise_interval[0], 6),
        "noise_end": round(m.noise_interval[1], 6),
        "distraction_start": round(m.distraction_interval[0], 6),
        "distraction_end": round(m.distraction_interval[1], 6),
    }


def _log_meta(runner: TrialRunner) -> dict:
    sc = runner.scenario
    return {
        "type": "meta",
        "scenario": sc.name,
        "map": sc.map_path.name,
        "variant": sc.variant.value,
        "seed": sc.seed,
        "dt": sc.dt,
        "start": sc.start_label,
        "waypoints": list(sc.waypoint_labels),
        "noise": [round(runner.noise_schedule.start, 9), round(runner.noise_schedule.end, 9)],
        "phantom_rate": runner.noise_schedule.phantom_rate,
        "distraction": [
            round(runner.distraction_schedule.start, 9),
            round(runner.distraction_schedule.end, 9),
        ],
        "item_period": runner.distraction_schedule.item_period,
    }


def decision_log_rows(runner: TrialRunner) -> list[dict]:
    rows = [_log_meta(runner)]
    switches_by_k: dict[int, list[dict]] = {}
    for row in runner.switch_rows:
        switches_by_k.setdefault(row["k"], []).append(row)
    for tick_row in runner.tick_rows:
        rows.extend(switches_by_k.get(tick_row["k"], []))
        rows.append(tick_row)
    result = {"type": "result"}
    result.update(metrics_record(runner.metrics(), runner.scenario.waypoint_radius))
    rows.append(result)
    return rows


def command_log_rows(runner: TrialRunner) -> list[dict]:
    meta = _log_meta(runner)
    meta["type"] = "meta"
    meta["ticks"] = runner.k
    meta["scenario_path"] = str(runner.scenario.map_path.parent)
    return [meta] + runner.command_rows


def write_jsonl(path, rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for row in rows:
            f.write(json.dumps(row, allow_nan=False) + "\n")


def read_jsonl(path) -> list[dict]:
    with open(path, "r", encoding="utf-8") as f:
        return [json.loads(line) for line in f if line.strip()]


def derive_metrics_from_log(rows: list[dict]) -> dict:
    """Re-derive trial metrics from a decision log's tick/switch rows."""
    meta = rows[0]
    if meta.get("type") != "meta":
        raise ValueError("decision log must start with a meta row")
    dt = float(meta["dt"])
    ticks = [r for r in rows if r.get("type") == "tick"]
    switches = [r for r in rows if r.get("type") == "switch"]
    time_teleop = sum(dt for r in ticks if r["loa"] == "teleoperation")
    time_autonomy = sum(dt for r in ticks if r["loa"] == "autonomy")
    ai = sum(1 for s in switches if s["initiator"] == "ai")
    never_interrupt = sum(
        1
        for s in switches
        if s["initiator"] == "ai"
        and s["from"] == "autonomy"
        and s["to"] == "teleoperation"
        and not s["attending"]
    )
    d0, d1 = meta["distraction"]
    period = float(meta["item_period"])
    presented = int((d1 - d0) / period) if d1 > d0 >= 0 else 0
    voided = set()
    interruptions = 0
    for s in switches:
        if s["to"] == "teleoperation" and d0 <= s["t"] < d1:
            interruptions += 1
            slot = int((s["t"] - d0) / period)
            if slot < presented:
                voided.add(slot)
    return {
        "variant": meta["variant"],
        "seed": meta["seed"],
        "ticks": len(ticks),
        "completion_time": round(len(ticks) * dt, 6),
        "switches_total": len(switches),
        "switches_ai": ai,
        "switches_human": len(switches) - ai,
        "ai_auto_to_teleop_while_away": never_interrupt,
        "time_teleop": round(time_teleop, 6),
        "time_autonomy": round(time_autonomy, 6),
        "secondary_presented": presented,
        "secondary_completed": presented - len(voided),
        "secondary_interruptions": interruptions,
    }


def verify_log(rows: list[dict]) -> list[str]:
    """Cross-check the embedded result row against re-derived metrics."""
    derived = derive_metrics_from_log(rows)
    result = rows[-1]
    if result.get("type") != "result":
        return ["decision log does not end with a result row"]
    problems = []
    for key, val in derived.items():
        have = result.get(key)
        if isinstance(val, float):
            ok = abs(float(have) - val) < 1e-6
        else:
            ok = have == val
        if not ok:
            problems.append(f"{key}: log-derived {val!r} != recorded {have!r}")
    return problems


def write_trials_csv(path, records: list[dict]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(TRIAL_COLUMNS)
        for rec in records:
            writer.writerow([_csv_cell(rec[c]) for c in TRIAL_COLUMNS])


def read_trials_csv(path) -> list[dict]:
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        out = []
        for row in reader:
            rec = {}
            for key, raw in row.items():
                rec[key] = _csv_parse(raw)
            out.append(rec)
        return out


def _csv_cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return v


def _csv_parse(raw: str):
    if raw == "true":
        return True
    if raw == "false":
        return False
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        return raw


def write_aggregate_csv(path, aggregate: dict) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["variant", "metric", "mean", "sd"])
        for variant in sorted(aggregate):
            stats = aggregate[variant]
            for metric in stats:
                mean, sd = stats[metric]
                writer.writerow([variant, metric, repr(mean), repr(sd)])


def write_summary(path, summary: dict) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(summary, f, indent=2, allow_nan=False)
        f.write("\n")
