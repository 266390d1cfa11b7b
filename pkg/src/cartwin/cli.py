"""Scenario-runner command line.

Exit codes: 0 success, 1 configuration error, 2 runtime divergence,
3 acceptance-check failure (budget or integrity).
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from .config import ConfigError
from .dynamics import DivergenceError, run_iso4138_continuous, run_iso4138_discrete
from .network import check_sr_class, flows_from_rig, simulate, vehicle_topology
from .scenario import load_rig_ref, load_vehicle_file, parse_scenario, run_scenario
from .sensors import Window, blind_spot_regions, coverage_map, min_full_coverage_range
from .store import RideStore

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DIVERGED = 2
EXIT_CHECK_FAILED = 3


def _cmd_run(args) -> int:
    config = parse_scenario(args.scenario)
    if args.seed is not None:
        config.seed = args.seed
    out_dir = args.out or config.out_dir or "out"
    report = run_scenario(config)

    from .report import render_report, write_outputs
    write_outputs(report, out_dir)
    sys.stdout.write(render_report(report))
    print(f"wall-clock runtime: {report.wall_clock_s:.3f} s (console only)")
    print(f"artifacts written to {Path(out_dir).resolve()}")
    return EXIT_OK if report.checks_passed else EXIT_CHECK_FAILED


def _cmd_iso4138(args) -> int:
    if args.vehicle == "default":
        from .dynamics import AxleTires, VehicleParams
        params, tires = VehicleParams(), AxleTires()
    else:
        params, tires = load_vehicle_file(args.vehicle)
    swa = math.radians(args.swa)
    speeds = [v / 3.6 for v in range(5, 131, 5)]
    if args.mode == "discrete":
        rep = run_iso4138_discrete(params, tires, swa, speeds)
    else:
        rep = run_iso4138_continuous(params, tires, swa)
    text = rep.to_csv()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_coverage(args) -> int:
    rig = load_rig_ref(args.rig)
    cov = coverage_map(rig, Window.square(args.window), args.cell, args.height)
    out = Path(args.out or "coverage")
    out.mkdir(parents=True, exist_ok=True)
    (out / "coverage.csv").write_text(cov.to_csv(), encoding="utf-8")
    (out / "coverage.pgm").write_bytes(cov.to_pgm())
    regions = blind_spot_regions(rig, rig.modalities(), Window.square(args.window),
                                 args.cell, args.height, cov=cov)
    print(f"sensors: {len(rig.sensors)}  blind regions: {len(regions)}")
    for modality in rig.modalities():
        r = min_full_coverage_range(rig, modality, query_height=args.height)
        desc = "none up to limit" if r is None else f"{r:.6g} m"
        print(f"full-coverage radius [{modality}]: {desc}")
    print(f"artifacts written to {out.resolve()}")
    return EXIT_OK


def _cmd_netcheck(args) -> int:
    config = parse_scenario(args.scenario)
    rig = load_rig_ref(config.rig_ref)
    topo = vehicle_topology(rig)
    flows = flows_from_rig(rig, topo)
    slowest = max(f.period for f in flows)
    duration = max(config.network_duration, 100.0 * slowest)
    result = simulate(topo, flows, duration, seed=config.seed + 1,
                      shaping=config.network_shaping)
    checks = [check_sr_class(result.stats[fid]) for fid in sorted(result.stats)]
    sys.stdout.write(result.to_csv())
    ok = True
    for chk in checks:
        print(chk.describe())
        ok = ok and chk.passed
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def _cmd_store(args) -> int:
    store = RideStore.load(args.dir)
    if args.store_cmd == "check":
        report = store.integrity_check()
        sys.stdout.write(report.describe())
        return EXIT_OK if report.ok else EXIT_CHECK_FAILED
    if args.store_cmd == "query":
        for scene_id in store.query_scenes(args.expr):
            print(scene_id)
        return EXIT_OK
    # export
    sys.stdout.write(store.export_csv(args.table))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cartwin",
        description="Desk-scale digital twin: vehicle dynamics, sensor coverage, "
                    "clock sync, in-vehicle network, and ride recording.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a scenario file end to end")
    p.add_argument("scenario")
    p.add_argument("--out", default=None, help="output directory (default: out)")
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("iso4138", help="steady-state circular driving test")
    p.add_argument("vehicle", help="vehicle file or 'default'")
    p.add_argument("--swa", type=float, required=True,
                   help="steering-wheel angle [deg]")
    p.add_argument("--mode", choices=("discrete", "continuous"), default="discrete")
    p.add_argument("--out", default=None, help="CSV output path (default: stdout)")
    p.set_defaults(func=_cmd_iso4138)

    p = sub.add_parser("coverage", help="BEV sensor coverage map")
    p.add_argument("rig", help="rig file or 'default'")
    p.add_argument("--window", type=float, default=40.0, help="square window side [m]")
    p.add_argument("--cell", type=float, default=0.5, help="cell size [m]")
    p.add_argument("--height", type=float, default=1.0, help="query height [m]")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_coverage)

    p = sub.add_parser("netcheck", help="network budgets for a scenario's flows")
    p.add_argument("scenario")
    p.set_defaults(func=_cmd_netcheck)

    p = sub.add_parser("store", help="ride store utilities")
    store_sub = p.add_subparsers(dest="store_cmd", required=True)
    pc = store_sub.add_parser("check", help="run the integrity check")
    pc.add_argument("dir")
    pq = store_sub.add_parser("query", help="query scenes by tag expression")
    pq.add_argument("dir")
    pq.add_argument("expr")
    pe = store_sub.add_parser("export", help="export one table as CSV")
    pe.add_argument("dir")
    pe.add_argument("table")
    p.set_defaults(func=_cmd_store)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DivergenceError as exc:
        print(f"runtime divergence: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except (FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
