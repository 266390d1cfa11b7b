"""Deterministic report rendering and artifact output.

All numbers are formatted to six significant digits in SI units. The
wall-clock runtime is intentionally left out of report.txt (it goes to the
console) so identical scenario+seed runs produce byte-identical files.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import yaml

from .network import margin_csv, stats_to_csv
from .scenario import ScenarioReport


def _num(x: float) -> str:
    return f"{x:.6g}"


def render_report(report: ScenarioReport) -> str:
    lines = [f"scenario report: {report.name}", f"seed: {report.seed}", ""]

    lines.append("[effective config]")
    cfg = yaml.safe_dump(report.effective_config, sort_keys=True,
                         default_flow_style=False)
    lines.extend("  " + line for line in cfg.strip().split("\n"))
    lines.append("")

    lines.append("[dynamics]")
    if report.dynamics_summary:
        s = report.dynamics_summary
        lines.append(f"  steps: {s['steps']}")
        lines.append(f"  final position: ({_num(s['final_x_m'])}, {_num(s['final_y_m'])}) m")
        lines.append(f"  final heading: {_num(s['final_psi_rad'])} rad")
        lines.append(f"  final speed: {_num(s['final_speed_mps'])} m/s")
        lines.append(f"  distance: {_num(s['distance_m'])} m")
        lines.append(f"  max speed: {_num(s['max_speed_mps'])} m/s")
        clamps = ", ".join(f"{k}={v}" for k, v in sorted(report.clamp_events.items()))
        lines.append(f"  clamp events: {clamps}")
    else:
        lines.append("  disabled")
    lines.append("")

    lines.append("[steady-state circular tests]")
    if report.iso_reports:
        for kind in sorted(report.iso_reports):
            rep = report.iso_reports[kind]
            conv = sum(1 for p in rep.points if p.converged)
            lines.append(f"  {kind}: {len(rep.points)} points, {conv} converged")
        if report.understeer is not None:
            lines.append(f"  understeer gradient: {_num(report.understeer)} rad/(m/s^2)")
    else:
        lines.append("  disabled")
    lines.append("")

    lines.append("[sensor coverage]")
    if report.coverage_summary:
        c = report.coverage_summary
        lines.append(f"  cells outside footprint: {c['cells']}")
        lines.append(f"  covered: {c['covered_cells']}  blind: {c['blind_cells']}"
                     f"  footprint: {c['footprint_cells']}")
        lines.append(f"  blind regions: {c['blind_regions']}"
                     f" (largest {_num(c['largest_blind_area_m2'])} m^2)")
    else:
        lines.append("  disabled")
    lines.append("")

    lines.append("[clock sync]")
    if report.ptp_summary:
        p = report.ptp_summary
        lines.append(f"  nodes: {p['nodes']}")
        lines.append(f"  worst steady RMS offset to GM: {_num(p['worst_steady_rms_s'])} s")
        lines.append(f"  worst max |offset| to GM: {_num(p['worst_max_abs_s'])} s")
    else:
        lines.append("  disabled")
    lines.append("")

    lines.append("[network]")
    if report.net_result is not None:
        for fid in sorted(report.net_result.stats):
            st = report.net_result.stats[fid]
            lines.append(f"  {fid} [{st.sr_class}] delivered={st.delivered}"
                         f" dropped={st.dropped} lat_max={_num(st.lat_max)} s"
                         f" jitter={_num(st.jitter)} s")
        for chk in report.net_checks:
            lines.append("  " + chk.describe())
    else:
        lines.append("  disabled")
    lines.append("")

    lines.append("[ride store]")
    if report.store is not None:
        lines.append(f"  ride: {report.ride_id}")
        lines.append(f"  scenes: {len(report.store.scenes)}"
                     f"  samples: {len(report.store.samples)}"
                     f"  sample data: {len(report.store.sample_data)}")
        lines.append("  " + report.integrity.describe().strip().replace("\n", "\n  "))
    else:
        lines.append("  disabled")
    lines.append("")

    passed = report.checks_passed
    lines.append(f"overall: {'PASS' if passed else 'FAIL'}")
    if not passed:
        for chk in report.net_checks:
            if not chk.passed:
                lines.append(f"  FAIL {chk.flow_id}")
        if report.integrity is not None and not report.integrity.ok:
            lines.append(f"  FAIL integrity ({len(report.integrity.violations)} violations)")
    return "\n".join(lines) + "\n"


def trajectory_csv(traj: np.ndarray) -> str:
    lines = ["t_s,x_m,y_m,psi_rad,vx_mps,vy_mps,yawrate_radps"]
    for row in traj:
        lines.append(",".join(f"{v:.9g}" for v in row))
    return "\n".join(lines) + "\n"


def write_outputs(report: ScenarioReport, out_dir: str | Path) -> Path:
    """Write report.txt, the CSV bundle, and the ride directory."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.txt").write_text(render_report(report), encoding="utf-8")
    if report.trajectory is not None:
        (out / "trajectory.csv").write_text(trajectory_csv(report.trajectory),
                                            encoding="utf-8")
    for kind, rep in report.iso_reports.items():
        (out / f"iso4138_{kind}.csv").write_text(rep.to_csv(), encoding="utf-8")
    if report.coverage is not None:
        (out / "coverage.csv").write_text(report.coverage.to_csv(), encoding="utf-8")
        (out / "coverage.pgm").write_bytes(report.coverage.to_pgm())
    if report.ptp_traces is not None:
        (out / "ptp_trace.csv").write_text(report.ptp_traces.to_csv(), encoding="utf-8")
    if report.net_result is not None:
        (out / "net_stats.csv").write_text(stats_to_csv(report.net_result.stats),
                                           encoding="utf-8")
        (out / "net_checks.csv").write_text(margin_csv(report.net_checks),
                                            encoding="utf-8")
    if report.store is not None:
        report.store.persist(out / "ride")
    return out
