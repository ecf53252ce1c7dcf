"""Command-line front end: plan, simulate, analyze, stats, export.

Machine-readable JSON goes to stdout (or --out files); human diagnostics
go to stderr. Exit codes are a stable contract:

  0 success, 1 usage/IO error, 2 no path, 3 stuck/timeout,
  4 replay verification failure.
"""

from __future__ import annotations

import argparse
import csv
import sys
from concurrent.futures import ProcessPoolExecutor

from . import analysis, stats
from .config import RunConfig
from .errors import InvalidEndpoint, NoPath, UnwindSimError
from .geometry import ViewMode
from .export import build_viewer_bundle
from .jsonio import doc_hash, dump_json, dumps_bytes, load_json
from .planner import PathPolyline, plan_theta_star
from .simulator import HeadTrace, ReplayLog, run_scenario
from .world import Scenario

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOPATH = 2
EXIT_STUCK = 3
EXIT_VERIFY = 4


def _err(msg: str) -> None:
    print(f"unwindsim: {msg}", file=sys.stderr)


def _parse_xy(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected X,Y, got {text!r}")
    return (float(parts[0]), float(parts[1]))


def _load_scenario(path) -> Scenario:
    return Scenario.from_doc(load_json(path, expect_format="scenario/1"))


def cmd_plan(args) -> int:
    try:
        scenario_doc = load_json(args.map)
        if scenario_doc.get("format") == "scenario/1":
            grid = Scenario.from_doc(scenario_doc).grid
        else:
            from .world import OccupancyGrid

            grid = OccupancyGrid.from_doc(scenario_doc["grid"] if "grid" in scenario_doc else scenario_doc)
        start = _parse_xy(args.start)
        goal = _parse_xy(args.goal)
    except (OSError, ValueError, KeyError, UnwindSimError) as e:
        _err(str(e))
        return EXIT_USAGE
    try:
        path = plan_theta_star(grid, start, goal)
    except NoPath as e:
        _err(str(e))
        return EXIT_NOPATH
    except InvalidEndpoint as e:
        _err(str(e))
        return EXIT_USAGE
    dump_json(path.to_doc(), args.out)
    print(f"planned {len(path.vertices)} vertices, length {path.length:.3f} m", file=sys.stderr)
    return EXIT_OK


def _simulate_one(scenario_path, config_path, mode, out_path):
    scenario = _load_scenario(scenario_path)
    config = RunConfig.from_doc(load_json(config_path, expect_format="runconfig/1"))
    config = config.with_mode(mode)
    log = run_scenario(scenario, config, mode)
    dump_json(log.to_doc(), out_path, compact=True)
    return log


def cmd_simulate(args) -> int:
    modes = [m.strip().upper() for m in args.mode.split(",")]
    for m in modes:
        if m not in ("UR", "CR"):
            _err(f"mode must be ur or cr, got {m!r}")
            return EXIT_USAGE
    if len(modes) > 1 and "{mode}" not in args.out:
        _err("multiple modes need an --out template containing {mode}")
        return EXIT_USAGE

    jobs = []
    for m in modes:
        out = args.out.replace("{mode}", m.lower())
        jobs.append((args.scenario, args.config, m, out))
    try:
        if args.jobs > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                logs = list(pool.map(_simulate_one_star, jobs))
        else:
            logs = [_simulate_one(*j) for j in jobs]
    except (OSError, KeyError, UnwindSimError) as e:
        _err(str(e))
        return EXIT_USAGE

    status = EXIT_OK
    for (_, _, m, out), log in zip(jobs, logs):
        summary = (
            f"mode={m} path_length={log.path_length:.3f} m "
            f"duration={log.duration:.2f} s total_rotation={log.total_rotation:.1f} deg "
            f"goal_reached={log.goal_reached}"
        )
        print(summary)
        if log.error is not None:
            _err(f"run ended early: {log.error['kind']} at step {log.error['step']} -> {out}")
            status = EXIT_NOPATH if log.error["kind"] == "NoPath" else EXIT_STUCK
        else:
            print(f"wrote {out}", file=sys.stderr)
    return status


def _simulate_one_star(job):
    return _simulate_one(*job)


def parse_head_spec(spec: str) -> HeadTrace:
    """still | follow:TAU | sin:AMP,PERIOD | scripted:FILE (headtrace/1)."""
    if spec == "still":
        return HeadTrace.still()
    if spec.startswith("follow:"):
        return HeadTrace.follow_heading(float(spec.split(":", 1)[1]))
    if spec.startswith("sin:"):
        amp, period = spec.split(":", 1)[1].split(",")
        return HeadTrace.sinusoid(float(amp), float(period))
    if spec.startswith("scripted:"):
        from .simulator import headtrace_from_doc

        return headtrace_from_doc(load_json(spec.split(":", 1)[1], expect_format="headtrace/1"))
    raise ValueError(f"unknown head trace spec {spec!r}")


def _structural_verify(log: ReplayLog) -> str | None:
    """Internal-consistency checks possible without the scenario file.
    Returns a failure description, or None if the log is coherent."""
    import math

    from .geometry import wrap_angle

    prev_t = 0.0
    px, py, pth = log.start
    path_length = 0.0
    total_rot = 0.0
    for i, s in enumerate(log.steps):
        if not math.isclose(s.t - prev_t, log.dt, rel_tol=0, abs_tol=1e-9):
            return f"step {i}: dt is not constant"
        prev_t = s.t
        expected_cam = -s.theta if log.mode == "UR" else 0.0
        if s.camera_frame_yaw != expected_cam:
            return f"step {i}: camera_frame_yaw inconsistent with mode {log.mode}"
        path_length += math.hypot(s.x - px, s.y - py)
        total_rot += abs(wrap_angle(s.theta - pth))
        px, py, pth = s.x, s.y, s.theta
    if abs(path_length - log.path_length) > 1e-9:
        return "footer path_length does not match steps"
    if abs(math.degrees(total_rot) - log.total_rotation) > 1e-9:
        return "footer total_rotation does not match steps"
    if abs(len(log.steps) * log.dt - log.duration) > 1e-9:
        return "footer duration does not match step count"
    return None


def cmd_analyze(args) -> int:
    try:
        log = ReplayLog.from_doc(load_json(args.replay, expect_format="replay/1"))
        head = parse_head_spec(args.head)
    except (OSError, ValueError, KeyError, UnwindSimError) as e:
        _err(str(e))
        return EXIT_USAGE

    problem = _structural_verify(log)
    if problem is not None:
        _err(f"replay verification failed: {problem}")
        return EXIT_VERIFY

    scenario = None
    if args.scenario:
        try:
            scenario = _load_scenario(args.scenario)
        except (OSError, KeyError, UnwindSimError) as e:
            _err(str(e))
            return EXIT_USAGE
        if doc_hash(scenario.to_doc()) != log.scenario_hash:
            _err("replay verification failed: scenario hash mismatch")
            return EXIT_VERIFY
        report = analysis.audit_run(log, scenario)
    else:
        report = analysis.AuditReport(
            total_rotation=log.total_rotation,
            path_length=log.path_length,
            duration=log.duration,
            goal_reached=log.goal_reached,
        )
        for s in log.steps:
            report.min_wall_clearance = min(report.min_wall_clearance, s.min_wall_clearance)
            report.min_person_distance = min(
                report.min_person_distance, s.min_person_distance
            )
            report.max_speed = max(report.max_speed, abs(s.v))
            report.max_abs_omega = max(report.max_abs_omega, abs(s.omega))

    if log.steps:
        yaws = head.yaw_series(log, ViewMode(log.mode))
        report.mean_head_deviation = analysis.mean_head_deviation(log.thetas, yaws)

    doc = report.to_doc()
    if args.out:
        dump_json(doc, args.out)
        print(f"wrote {args.out}", file=sys.stderr)
    else:
        sys.stdout.buffer.write(dumps_bytes(doc))
    return EXIT_OK


def _read_columns(path):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise UnwindSimError("empty CSV")
        cols = {name.strip(): [] for name in header}
        names = [name.strip() for name in header]
        for row in reader:
            for name, cell in zip(names, row):
                cell = cell.strip()
                if cell:
                    cols[name].append(float(cell))
    return cols


def cmd_stats(args) -> int:
    try:
        if args.test in ("binomial", "cp"):
            if args.k is None or args.n is None:
                raise UnwindSimError(f"--test {args.test} requires --k and --n")
            if args.test == "binomial":
                result = stats.exact_binomial_test(args.k, args.n, args.p0)
                doc = result.to_doc()
            else:
                lo, hi = stats.clopper_pearson_ci(args.k, args.n)
                doc = {"ci_low": lo, "ci_high": hi, "k": args.k, "n": args.n, "method": "exact"}
        else:
            if not args.input:
                raise UnwindSimError(f"--test {args.test} requires --input CSV")
            cols = _read_columns(args.input)
            if len(cols) < 2:
                raise UnwindSimError("need two data columns")
            names = list(cols)
            a, b = cols[names[0]], cols[names[1]]
            if args.test == "wilcoxon":
                doc = stats.wilcoxon_signed_rank(a, b).to_doc()
            elif args.test == "mwu":
                doc = stats.mann_whitney_u(a, b).to_doc()
            elif args.test == "ttest":
                doc = stats.paired_t_test(a, b).to_doc()
            else:
                raise UnwindSimError(f"unknown test {args.test!r}")
    except (OSError, ValueError, UnwindSimError) as e:
        _err(str(e))
        return EXIT_USAGE
    sys.stdout.buffer.write(dumps_bytes(doc))
    return EXIT_OK


def cmd_export(args) -> int:
    try:
        log = ReplayLog.from_doc(load_json(args.replay, expect_format="replay/1"))
        scenario = _load_scenario(args.scenario)
        bundle = build_viewer_bundle(log, scenario)
    except (OSError, KeyError, UnwindSimError) as e:
        _err(str(e))
        return EXIT_USAGE
    dump_json(bundle, args.out)
    print(
        f"wrote {args.out}: {len(bundle['walls'])} wall segments, "
        f"{len(bundle['pedestrians'])} pedestrians, {bundle['duration']:.2f} s",
        file=sys.stderr,
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="unwindsim", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="Theta* path on an occupancy grid")
    p.add_argument("--map", required=True, help="scenario/1 file (or bare grid JSON)")
    p.add_argument("--start", required=True, help="X,Y meters")
    p.add_argument("--goal", required=True, help="X,Y meters")
    p.add_argument("--out", required=True, help="output path/1 JSON")
    p.set_defaults(fn=cmd_plan)

    p = sub.add_parser("simulate", help="run a scenario and write a replay log")
    p.add_argument("--scenario", required=True)
    p.add_argument("--config", required=True)
    p.add_argument("--mode", required=True, help="ur | cr (or ur,cr with an --out template)")
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1, help="parallel runs when several modes")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("analyze", help="audit a replay and head trace")
    p.add_argument("--replay", required=True)
    p.add_argument("--head", required=True, help="still | follow:TAU | sin:AMP,PERIOD | scripted:FILE")
    p.add_argument("--out", default=None)
    p.add_argument("--scenario", default=None, help="enables the clearance-policy audit")
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("stats", help="statistical tests")
    p.add_argument("--test", required=True, choices=["binomial", "cp", "wilcoxon", "mwu", "ttest"])
    p.add_argument("--input", default=None, help="CSV with two data columns")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--p0", type=float, default=0.5)
    p.set_defaults(fn=cmd_stats)

    p = sub.add_parser("export", help="build a viewer bundle from a replay")
    p.add_argument("--replay", required=True)
    p.add_argument("--scenario", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_export)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
