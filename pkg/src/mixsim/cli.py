"""Command-line entry points.

    mixsim run     --scenario FILE [--variant V] [--seed N] --out DIR
    mixsim batch   --scenario FILE --variants mi,caa-mi --runs N
                   [--seed-base N] [--jobs J] [--logs] --out DIR
    mixsim replay  --log decision.jsonl
    mixsim replay  --commands commands.jsonl --scenario FILE --out DIR
    mixsim serve   --scenario FILE --port N [--realtime-factor F] [--out DIR]
"""

import argparse
import sys
from pathlib import Path

from .control.controller import Variant
from .harness import load_scenario, run_batch, run_trial
from .harness.report import (
    command_log_rows,
    decision_log_rows,
    derive_metrics_from_log,
    metrics_record,
    read_jsonl,
    verify_log,
    write_aggregate_csv,
    write_jsonl,
    write_summary,
    write_trials_csv,
)

VARIANT_CHOICES = [v.value for v in Variant]


def _cmd_run(args) -> int:
    scenario = load_scenario(args.scenario, variant=args.variant, seed=args.seed)
    metrics, runner = run_trial(scenario)
    out = Path(args.out)
    write_jsonl(out / "decision_log.jsonl", decision_log_rows(runner))
    write_jsonl(out / "command_log.jsonl", command_log_rows(runner))
    record = metrics_record(metrics, scenario.waypoint_radius)
    write_trials_csv(out / "trial.csv", [record])
    for key, val in record.items():
        print(f"{key}: {val}")
    return 0


def _cmd_batch(args) -> int:
    scenario = load_scenario(args.scenario)
    variants = [v.strip() for v in args.variants.split(",") if v.strip()]
    out = Path(args.out)
    log_dir = out / "logs" if args.logs else None
    if log_dir:
        log_dir.mkdir(parents=True, exist_ok=True)
    result = run_batch(
        scenario, variants, args.runs, seed_base=args.seed_base, jobs=args.jobs, log_dir=log_dir
    )
    write_trials_csv(out / "trials.csv", result.records())
    aggregate = result.aggregate()
    write_aggregate_csv(out / "aggregate.csv", aggregate)
    summary = {
        "scenario": result.scenario_name,
        "variants": result.variants,
        "seeds": result.seeds,
        "aggregate": {
            v: {m: {"mean": s[0], "sd": s[1]} for m, s in stats.items()}
            for v, stats in aggregate.items()
        },
        "failures": {f"{v}:{s}": msg for (v, s), msg in sorted(result.failures.items())},
    }
    write_summary(out / "summary.json", summary)
    for variant, stats in aggregate.items():
        mean, sd = stats["switches_total"]
        print(f"{variant}: switches {mean:.2f} (sd {sd:.2f}), "
              f"completion {stats['completion_time'][0]:.1f}s, "
              f"secondary {stats['secondary_completed'][0]:.2f}")
    if result.failures:
        print(f"{len(result.failures)} failed trials; see summary.json", file=sys.stderr)
        return 1
    return 0


def _cmd_replay(args) -> int:
    if args.log:
        rows = read_jsonl(args.log)
        derived = derive_metrics_from_log(rows)
        for key, val in derived.items():
            print(f"{key}: {val}")
        problems = verify_log(rows)
        if problems:
            for p in problems:
                print(f"MISMATCH {p}", file=sys.stderr)
            return 1
        print("log is self-consistent")
        return 0
    # headless re-execution of a recorded command log
    from .harness.trial import CommandLogDriver, TrialRunner

    rows = read_jsonl(args.commands)
    meta, command_rows = rows[0], rows[1:]
    scenario = load_scenario(args.scenario, variant=meta["variant"], seed=int(meta["seed"]))
    runner = TrialRunner(scenario)
    runner.run(CommandLogDriver(command_rows), max_ticks=int(meta["ticks"]))
    out = Path(args.out)
    write_jsonl(out / "decision_log.jsonl", decision_log_rows(runner))
    write_jsonl(out / "command_log.jsonl", command_log_rows(runner))
    print(f"replayed {runner.k} ticks -> {out / 'decision_log.jsonl'}")
    return 0


def _cmd_serve(args) -> int:
    from .bridge.service import serve

    scenario = load_scenario(args.scenario, variant=args.variant, seed=args.seed)
    out = Path(args.out) if args.out else None
    serve(
        scenario,
        host=args.host,
        port=args.port,
        realtime_factor=args.realtime_factor,
        out_dir=out,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mixsim")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one headless trial")
    p.add_argument("--scenario", required=True)
    p.add_argument("--variant", choices=VARIANT_CHOICES, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("batch", help="paired-seed Monte-Carlo comparison")
    p.add_argument("--scenario", required=True)
    p.add_argument("--variants", default="mi,caa-mi")
    p.add_argument("--runs", type=int, required=True)
    p.add_argument("--seed-base", type=int, default=0)
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--logs", action="store_true", help="write per-trial logs")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_batch)

    p = sub.add_parser("replay", help="re-derive metrics from a decision log, or re-execute a command log")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--log", help="decision log to re-derive metrics from")
    group.add_argument("--commands", help="command log to re-execute headless")
    p.add_argument("--scenario", help="scenario file (required with --commands)")
    p.add_argument("--out", help="output directory (required with --commands)")
    p.set_defaults(func=_cmd_replay)

    p = sub.add_parser("serve", help="live bridge for the operator console")
    p.add_argument("--scenario", required=True)
    p.add_argument("--variant", choices=VARIANT_CHOICES, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--realtime-factor", type=float, default=1.0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "replay" and args.commands and (not args.scenario or not args.out):
        print("replay --commands requires --scenario and --out", file=sys.stderr)
        return 2
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
