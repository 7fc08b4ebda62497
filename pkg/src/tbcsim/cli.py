"""Command-line entry point.

Subcommands:
  run            execute a scenario file or builtin, write trace + summary
  list-builtins  print the committed scenario names
  summarize      recompute the summary of a written trace directory
  oracle         enumerate the lane-change toy grid and report inclusion
  serve          run the live WebSocket teleoperation service

Exit codes: 0 success, 2 config error, 3 safety-assertion failure in a
scenario that declares a safety bound.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import scenario as sc
from . import tomlcfg
from .oracle import ToyPolicy, verify_theorem1

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SAFETY = 3


def _load(args) -> sc.ScenarioConfig:
    name_or_path = args.scenario
    overrides = args.override or []
    if Path(name_or_path).exists():
        data = tomlcfg.loads(Path(name_or_path).read_text())
        if overrides:
            data = sc.apply_overrides(data, overrides)
        if args.seed is not None:
            data["seed"] = args.seed
        return sc.parse_scenario(data)
    data = tomlcfg.loads(sc.builtin_text(name_or_path))
    if overrides:
        data = sc.apply_overrides(data, overrides)
    if args.seed is not None:
        data["seed"] = args.seed
    return sc.parse_scenario(data)


def cmd_run(args) -> int:
    try:
        cfg = _load(args)
    except (sc.ConfigError, tomlcfg.TomlError, KeyError) as exc:
        print(exc, file=sys.stderr)
        return EXIT_CONFIG
    trace = sc.run_scenario(cfg)
    summary = sc.summarize(trace)
    if args.out:
        trace.write(args.out)
        Path(args.out, "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True))
    print(json.dumps(summary, indent=2, sort_keys=True))
    if cfg.safety_min_h is not None and trace.min_h_world < cfg.safety_min_h:
        print(
            f"safety assertion failed: min h {trace.min_h_world} < bound {cfg.safety_min_h}",
            file=sys.stderr,
        )
        return EXIT_SAFETY
    return EXIT_OK


def cmd_list_builtins(args) -> int:
    for name in sc.builtin_names():
        print(name)
    return EXIT_OK


def cmd_summarize(args) -> int:
    out = Path(args.trace_dir)
    cfg_path = out / "scenario.json"
    trace_path = out / "trace.csv"
    if not cfg_path.exists() or not trace_path.exists():
        print(f"{out} does not look like a trace directory", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = sc.parse_scenario(json.loads(cfg_path.read_text()))
    except sc.ConfigError as exc:
        print(exc, file=sys.stderr)
        return EXIT_CONFIG
    rows = _read_trace(trace_path)
    timing = {}
    timing_path = out / "timing.json"
    if timing_path.exists():
        timing = json.loads(timing_path.read_text())
    events = []
    for r in rows:
        if r[24] or r[25]:
            events.append({
                "t": r[0], "agent_id": r[1],
                "kind": "switch" if r[25] else "reset",
                "maneuver_idx": r[23],
            })
    trace = sc.TraceSet(
        config=cfg,
        rows=rows,
        events=events,
        step_seconds=[],
        min_h_world=min((r[19] for r in rows), default=float("inf")),
    )
    summary = sc.summarize(trace)
    summary["timing"] = timing
    print(json.dumps(summary, indent=2, sort_keys=True))
    return EXIT_OK


def _read_trace(path) -> list:
    import csv as _csv

    rows = []
    with open(path, newline="") as f:
        reader = _csv.reader(f)
        header = next(reader)
        assert tuple(header) == sc.TRACE_COLUMNS, "unexpected trace columns"
        for rec in reader:
            row = []
            for name, val in zip(header, rec):
                if name in ("agent_id", "maneuver_idx", "reset_flag", "switch_flag"):
                    row.append(int(val))
                else:
                    row.append(float(val))
            rows.append(tuple(row))
    return rows


def cmd_oracle(args) -> int:
    if args.toy != "truck":
        print(f"unknown toy {args.toy!r}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        nx, _, ny = args.grid.partition("x")
        grid = (int(nx), int(ny))
    except ValueError:
        print(f"bad grid {args.grid!r}, expected like 200x200", file=sys.stderr)
        return EXIT_CONFIG
    policy = ToyPolicy(
        maneuver_time=args.maneuver_time,
        maneuver_decel=args.maneuver_decel,
    )
    report = verify_theorem1(policy, grid=grid)
    text = report.to_json()
    if args.out:
        Path(args.out).write_text(text)
    print(text)
    return EXIT_OK if not report.violations else 1


def cmd_serve(args) -> int:
    try:
        cfg = _load(args)
    except (sc.ConfigError, tomlcfg.TomlError, KeyError) as exc:
        print(exc, file=sys.stderr)
        return EXIT_CONFIG
    from .service import serve

    serve(
        cfg,
        port=args.port,
        realtime_factor=args.realtime_factor,
        pilot_agent=args.pilot_agent,
        record_dir=args.record,
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tbcsim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario file or builtin")
    p_run.add_argument("--scenario", required=True, help="path to a TOML file or a builtin name")
    p_run.add_argument("--out", help="directory for trace.csv / summary.json")
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--override", action="append", metavar="KEY=VALUE")
    p_run.set_defaults(func=cmd_run)

    p_list = sub.add_parser("list-builtins", help="list committed scenarios")
    p_list.set_defaults(func=cmd_list_builtins)

    p_sum = sub.add_parser("summarize", help="summarize a written trace directory")
    p_sum.add_argument("trace_dir")
    p_sum.set_defaults(func=cmd_summarize)

    p_or = sub.add_parser("oracle", help="lane-change toy set-inclusion check")
    p_or.add_argument("--toy", default="truck")
    p_or.add_argument("--grid", default="200x200")
    p_or.add_argument("--out")
    p_or.add_argument("--maneuver-time", type=float, default=1.0)
    p_or.add_argument("--maneuver-decel", type=float, default=0.5)
    p_or.set_defaults(func=cmd_oracle)

    p_srv = sub.add_parser("serve", help="live teleoperation service")
    p_srv.add_argument("--scenario", required=True)
    p_srv.add_argument("--port", type=int, default=8700)
    p_srv.add_argument("--realtime-factor", type=float, default=1.0)
    p_srv.add_argument("--pilot-agent", type=int, default=0)
    p_srv.add_argument("--record", default=None)
    p_srv.add_argument("--seed", type=int, default=None)
    p_srv.add_argument("--override", action="append", metavar="KEY=VALUE")
    p_srv.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
