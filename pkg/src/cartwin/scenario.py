"""Scenario configuration, driving-mode limits, and the orchestrated run.

A scenario drives the vehicle model through a timed maneuver script under
the selected driving-mode limits, generates per-sensor measurement
timestamps with clock-sync offsets applied, runs the network twin on flows
derived from the rig, and records everything into a ride store.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .config import ConfigError, angle_from, load_yaml, reject_unknown_keys
from .dynamics import (
    AxleTires,
    DivergenceError,
    VehicleParams,
    run_iso4138_continuous,
    run_iso4138_discrete,
    tires_from_dict,
    understeer_gradient,
    vehicle_params_from_dict,
)
from .dynamics.backend import kernel
from .dynamics.iso4138 import InsufficientDataError
from .dynamics.model import static_axle_loads, tire_tuple, veh_tuple
from .network import (
    check_sr_class,
    flows_from_rig,
    simulate as net_simulate,
    vehicle_topology,
)
from .sensors import Window, blind_spot_regions, coverage_map, default_rig, load_rig
from .store import (
    CalibratedSensor,
    EgoPose,
    MapRecord,
    Ride,
    RideStore,
    Sample,
    SampleData,
    Scene,
    auto_tags,
)
from .store.align import align_with_assignments, pick_anchor
from .store.align import segment_scenes as segment_windows
from .timesync import run_sync_simulation, vehicle_sync_topology

KPH = 1.0 / 3.6
HIGH_DYNAMIC_MAX_SPEED = 130.0 * KPH

MODE_NAMES = ("series", "measurement", "autonomous", "high_dynamic")


class ActuationError(ValueError):
    """Actuation requested in a mode whose actuators are separated."""


@dataclass(frozen=True)
class DrivingMode:
    """Mode limits; series and measurement forbid actuation entirely."""

    name: str
    max_speed: float = math.inf
    max_accel: float = math.inf
    max_decel: float = math.inf
    max_lat_accel: float = math.inf
    max_steer_rate: float = math.inf

    def __post_init__(self):
        if self.name not in MODE_NAMES:
            raise ValueError(f"unknown driving mode {self.name!r}")
        if self.name == "high_dynamic" and self.max_speed != HIGH_DYNAMIC_MAX_SPEED:
            raise ValueError("high_dynamic max speed is fixed at 130 km/h")
        if self.name == "autonomous":
            hd = HIGH_DYNAMIC_MODE
            if not (self.max_speed < hd.max_speed
                    and self.max_steer_rate < hd.max_steer_rate):
                raise ValueError("autonomous limits must be strictly tighter "
                                 "than high_dynamic")

    @property
    def actuation_allowed(self) -> bool:
        return self.name in ("autonomous", "high_dynamic")


HIGH_DYNAMIC_MODE = DrivingMode(
    name="high_dynamic",
    max_speed=HIGH_DYNAMIC_MAX_SPEED,
    max_steer_rate=6.0,
)

AUTONOMOUS_MODE = DrivingMode(
    name="autonomous",
    max_speed=50.0 * KPH,
    max_accel=2.5,
    max_decel=2.5,
    max_lat_accel=2.5,
    max_steer_rate=0.3,
)

SERIES_MODE = DrivingMode(name="series")
MEASUREMENT_MODE = DrivingMode(name="measurement")

MODE_PRESETS = {
    "series": SERIES_MODE,
    "measurement": MEASUREMENT_MODE,
    "autonomous": AUTONOMOUS_MODE,
    "high_dynamic": HIGH_DYNAMIC_MODE,
}


@dataclass(frozen=True)
class Command:
    """One actuation request: speed target [m/s], steering-wheel rate
    [rad/s], longitudinal acceleration [m/s^2]."""

    speed_target: float = 0.0
    swa_rate: float = 0.0
    accel: float = 0.0


def _clamp(value: float, lo: float, hi: float) -> tuple[float, bool]:
    if value > hi:
        return hi, True
    if value < lo:
        return lo, True
    return value, False


def limit_command(mode: DrivingMode, command: Command) -> tuple[Command, dict[str, bool]]:
    """Clamp each channel to the mode limits.

    Clamping preserves sign, never increases a magnitude, and is idempotent.
    Returns the clamped command and per-channel flags.
    """
    if not mode.actuation_allowed:
        raise ActuationError(
            f"mode {mode.name!r} has actuation electronically separated"
        )
    speed, f_speed = _clamp(command.speed_target, -mode.max_speed, mode.max_speed)
    rate, f_rate = _clamp(command.swa_rate, -mode.max_steer_rate, mode.max_steer_rate)
    accel, f_accel = _clamp(command.accel, -mode.max_decel, mode.max_accel)
    return (Command(speed_target=speed, swa_rate=rate, accel=accel),
            {"speed_target": f_speed, "swa_rate": f_rate, "accel": f_accel})


@dataclass(frozen=True)
class ManeuverStep:
    t: float
    swa: float | None = None
    speed: float | None = None
    fx: float | None = None


@dataclass
class ScenarioConfig:
    name: str
    vehicle: VehicleParams
    tires: AxleTires
    rig_ref: str
    mode: DrivingMode
    maneuver: tuple[ManeuverStep, ...]
    duration: float
    dt: float
    seed: int
    initial_speed: float
    scene_duration: float
    kp_speed: float
    ptp_enabled: bool
    ptp_sync_interval: float
    ptp_noise_sigma: float
    ptp_drift: float
    network_enabled: bool
    network_duration: float
    network_shaping: str
    coverage_enabled: bool
    coverage_window: float
    coverage_cell: float
    coverage_height: float
    iso_swa: float | None
    iso_mode: str
    out_dir: str | None
    raw: dict = field(default_factory=dict, repr=False)

    def effective_dict(self) -> dict:
        """Fully resolved configuration, echoed for reproducibility."""
        return {
            "name": self.name,
            "vehicle": {k: getattr(self.vehicle, k) for k in
                        ("l_f", "l_r", "l_table", "m", "I_z", "rho", "A", "c_d",
                         "f_r", "steering_ratio", "g", "drive_split_front",
                         "v_x_guard", "kin_relax_tau")},
            "tires": {
                "front": {"B": self.tires.front.B, "C": self.tires.front.C,
                          "D_scale": self.tires.front.D_scale, "E": self.tires.front.E},
                "rear": {"B": self.tires.rear.B, "C": self.tires.rear.C,
                         "D_scale": self.tires.rear.D_scale, "E": self.tires.rear.E},
            },
            "rig": self.rig_ref,
            "mode": {"name": self.mode.name,
                     "max_speed_mps": self.mode.max_speed,
                     "max_accel_mps2": self.mode.max_accel,
                     "max_decel_mps2": self.mode.max_decel,
                     "max_lat_accel_mps2": self.mode.max_lat_accel,
                     "max_steer_rate_radps": self.mode.max_steer_rate},
            "maneuver": [
                {"t": m.t, "swa_rad": m.swa, "speed_mps": m.speed, "fx_n": m.fx}
                for m in self.maneuver
            ],
            "duration_s": self.duration,
            "dt_s": self.dt,
            "seed": self.seed,
            "initial_speed_mps": self.initial_speed,
            "scene_duration_s": self.scene_duration,
            "kp_speed": self.kp_speed,
            "ptp": {"enabled": self.ptp_enabled,
                    "sync_interval_s": self.ptp_sync_interval,
                    "noise_sigma_s": self.ptp_noise_sigma,
                    "drift_rate": self.ptp_drift},
            "network": {"enabled": self.network_enabled,
                        "duration_s": self.network_duration,
                        "shaping": self.network_shaping},
            "coverage": {"enabled": self.coverage_enabled,
                         "window_m": self.coverage_window,
                         "cell_m": self.coverage_cell,
                         "query_height_m": self.coverage_height},
            "iso4138": ({"swa_rad": self.iso_swa, "mode": self.iso_mode}
                        if self.iso_swa is not None else None),
        }


_TOP_KEYS = {"name", "vehicle", "tires", "rig", "mode", "maneuver", "duration_s",
             "dt_s", "seed", "initial_speed_mps", "initial_speed_kph",
             "scene_duration_s", "kp_speed", "ptp", "network", "coverage",
             "iso4138", "out_dir"}
_MODE_KEYS = {"name", "max_speed_mps", "max_speed_kph", "max_accel_mps2",
              "max_decel_mps2", "max_lat_accel_mps2", "max_steer_rate_radps"}
_MANEUVER_KEYS = {"t", "swa_deg", "swa_rad", "speed_kph", "speed_mps", "fx_n"}
_PTP_KEYS = {"enabled", "sync_interval_s", "noise_sigma_s", "drift_rate"}
_NET_KEYS = {"enabled", "duration_s", "shaping"}
_COV_KEYS = {"enabled", "window_m", "cell_m", "query_height_m"}
_ISO_KEYS = {"swa_deg", "swa_rad", "mode"}


def load_vehicle_file(path: str | Path) -> tuple[VehicleParams, AxleTires]:
    doc = load_yaml(path)
    reject_unknown_keys(doc, {"vehicle", "tires"}, context=str(path))
    try:
        params = vehicle_params_from_dict(doc.get("vehicle", {}))
        tires = tires_from_dict(doc["tires"]) if "tires" in doc else AxleTires()
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return params, tires


def _mode_from_config(raw: dict) -> DrivingMode:
    reject_unknown_keys(raw, _MODE_KEYS, context="mode")
    name = raw.get("name")
    if name not in MODE_PRESETS:
        raise ConfigError(f"mode.name must be one of {MODE_NAMES}, got {name!r}")
    mode = MODE_PRESETS[name]
    overrides = {}
    if "max_speed_mps" in raw and "max_speed_kph" in raw:
        raise ConfigError("give max_speed_mps or max_speed_kph, not both")
    if "max_speed_mps" in raw:
        overrides["max_speed"] = float(raw["max_speed_mps"])
    elif "max_speed_kph" in raw:
        overrides["max_speed"] = float(raw["max_speed_kph"]) * KPH
    for key, attr in (("max_accel_mps2", "max_accel"), ("max_decel_mps2", "max_decel"),
                      ("max_lat_accel_mps2", "max_lat_accel"),
                      ("max_steer_rate_radps", "max_steer_rate")):
        if key in raw:
            overrides[attr] = float(raw[key])
    try:
        return replace(mode, **overrides) if overrides else mode
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _maneuver_from_config(entries) -> tuple[ManeuverStep, ...]:
    steps = []
    for i, raw in enumerate(entries or []):
        ctx = f"maneuver[{i}]"
        reject_unknown_keys(raw, _MANEUVER_KEYS, context=ctx)
        if "t" not in raw:
            raise ConfigError(f"{ctx}: missing t")
        swa = None
        if "swa_deg" in raw or "swa_rad" in raw:
            swa = angle_from(raw, "swa", context=ctx)
        speed = None
        if "speed_kph" in raw and "speed_mps" in raw:
            raise ConfigError(f"{ctx}: give speed_kph or speed_mps, not both")
        if "speed_kph" in raw:
            speed = float(raw["speed_kph"]) * KPH
        elif "speed_mps" in raw:
            speed = float(raw["speed_mps"])
        fx = float(raw["fx_n"]) if "fx_n" in raw else None
        if speed is not None and fx is not None:
            raise ConfigError(f"{ctx}: speed and fx commands are exclusive")
        steps.append(ManeuverStep(t=float(raw["t"]), swa=swa, speed=speed, fx=fx))
    steps.sort(key=lambda s: s.t)
    return tuple(steps)


def scenario_from_dict(doc: dict, *, name: str = "scenario") -> ScenarioConfig:
    reject_unknown_keys(doc, _TOP_KEYS, context="scenario")

    if "vehicle" in doc and isinstance(doc["vehicle"], str):
        vehicle, tires = load_vehicle_file(doc["vehicle"])
        if "tires" in doc:
            tires = tires_from_dict(doc["tires"])
    else:
        try:
            vehicle = vehicle_params_from_dict(doc.get("vehicle", {}) or {})
            tires = tires_from_dict(doc["tires"]) if "tires" in doc else AxleTires()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    mode = _mode_from_config(doc.get("mode", {"name": "autonomous"}))
    maneuver = _maneuver_from_config(doc.get("maneuver", []))

    if not mode.actuation_allowed:
        for step in maneuver:
            if (step.swa not in (None, 0.0) or (step.speed or 0.0) != 0.0
                    or (step.fx or 0.0) != 0.0):
                raise ConfigError(
                    f"mode {mode.name!r} has actuation electronically separated; "
                    f"maneuver commands are not allowed"
                )

    duration = float(doc.get("duration_s", 10.0))
    dt = float(doc.get("dt_s", 1e-3))
    if duration <= 0.0:
        raise ConfigError("duration_s must be positive")
    if not 0.0 < dt <= 0.01:
        raise ConfigError("dt_s must be in (0, 0.01]")

    if "initial_speed_mps" in doc and "initial_speed_kph" in doc:
        raise ConfigError("give initial_speed_mps or initial_speed_kph, not both")
    if "initial_speed_mps" in doc:
        initial_speed = float(doc["initial_speed_mps"])
    elif "initial_speed_kph" in doc:
        initial_speed = float(doc["initial_speed_kph"]) * KPH
    else:
        initial_speed = next((s.speed for s in maneuver if s.speed is not None), 0.0)

    ptp_raw = doc.get("ptp", {}) or {}
    reject_unknown_keys(ptp_raw, _PTP_KEYS, context="ptp")
    net_raw = doc.get("network", {}) or {}
    reject_unknown_keys(net_raw, _NET_KEYS, context="network")
    cov_raw = doc.get("coverage", {}) or {}
    reject_unknown_keys(cov_raw, _COV_KEYS, context="coverage")

    iso_raw = doc.get("iso4138")
    iso_swa = None
    iso_mode = "discrete"
    if iso_raw:
        reject_unknown_keys(iso_raw, _ISO_KEYS, context="iso4138")
        iso_swa = angle_from(iso_raw, "swa", context="iso4138")
        iso_mode = str(iso_raw.get("mode", "discrete"))
        if iso_mode not in ("discrete", "continuous", "both"):
            raise ConfigError("iso4138.mode must be discrete, continuous, or both")

    shaping = str(net_raw.get("shaping", "cbs"))
    if shaping not in ("cbs", "priority", "fifo"):
        raise ConfigError("network.shaping must be cbs, priority, or fifo")

    return ScenarioConfig(
        name=str(doc.get("name", name)),
        vehicle=vehicle,
        tires=tires,
        rig_ref=str(doc.get("rig", "default")),
        mode=mode,
        maneuver=maneuver,
        duration=duration,
        dt=dt,
        seed=int(doc.get("seed", 0)),
        initial_speed=initial_speed,
        scene_duration=float(doc.get("scene_duration_s", 20.0)),
        kp_speed=float(doc.get("kp_speed", 5000.0)),
        ptp_enabled=bool(ptp_raw.get("enabled", True)),
        ptp_sync_interval=float(ptp_raw.get("sync_interval_s", 1.0)),
        ptp_noise_sigma=float(ptp_raw.get("noise_sigma_s", 100e-9)),
        ptp_drift=float(ptp_raw.get("drift_rate", 7.92e-9)),
        network_enabled=bool(net_raw.get("enabled", True)),
        network_duration=float(net_raw.get("duration_s", 1.0)),
        network_shaping=shaping,
        coverage_enabled=bool(cov_raw.get("enabled", True)),
        coverage_window=float(cov_raw.get("window_m", 40.0)),
        coverage_cell=float(cov_raw.get("cell_m", 0.5)),
        coverage_height=float(cov_raw.get("query_height_m", 1.0)),
        iso_swa=iso_swa,
        iso_mode=iso_mode,
        out_dir=doc.get("out_dir"),
        raw=doc,
    )


def parse_scenario(path: str | Path) -> ScenarioConfig:
    """Load and validate a scenario file, resolving all defaults."""
    doc = load_yaml(path)
    return scenario_from_dict(doc, name=Path(path).stem)


def load_rig_ref(rig_ref: str):
    if rig_ref == "default":
        return default_rig()
    return load_rig(rig_ref)


@dataclass
class ScenarioReport:
    """All subsystem outputs of one run; rendering lives in report.py."""

    name: str
    effective_config: dict
    seed: int
    trajectory: np.ndarray | None = None
    dynamics_summary: dict = field(default_factory=dict)
    clamp_events: dict = field(default_factory=dict)
    iso_reports: dict = field(default_factory=dict)
    understeer: float | None = None
    coverage: "object | None" = None
    coverage_summary: dict = field(default_factory=dict)
    ptp_traces: "object | None" = None
    ptp_summary: dict = field(default_factory=dict)
    net_result: "object | None" = None
    net_checks: list = field(default_factory=list)
    ride_id: str | None = None
    store: "RideStore | None" = None
    integrity: "object | None" = None
    wall_clock_s: float = 0.0

    @property
    def checks_passed(self) -> bool:
        net_ok = all(c.passed for c in self.net_checks)
        store_ok = self.integrity.ok if self.integrity is not None else True
        return net_ok and store_ok


def _run_dynamics(config: ScenarioConfig):
    """Maneuver loop: rate-limited steering, regulated speed, mode clamps."""
    p = config.vehicle
    veh = veh_tuple(p)
    tire = tire_tuple(p, config.tires)
    loads = static_axle_loads(p)
    fx_cap = (config.tires.front.D_scale * loads.F_z_f
              + config.tires.rear.D_scale * loads.F_z_r)
    ff0 = p.f_r * p.m * p.g
    ff2 = 0.5 * p.rho * p.c_d * p.A
    mode = config.mode
    n_steps = int(round(config.duration / config.dt))
    dt = config.dt

    state = (0.0, 0.0, 0.0, config.initial_speed, 0.0, 0.0)
    traj = np.empty((n_steps + 1, 7))
    traj[0] = (0.0, *state)
    swa = 0.0
    target_swa = 0.0
    target_speed: float | None = config.initial_speed
    target_fx: float | None = None
    clamp_counts = {"speed_target": 0, "swa_rate": 0, "accel": 0, "lat_accel": 0}
    script = list(config.maneuver)
    next_idx = 0

    for k in range(n_steps):
        t = k * dt
        while next_idx < len(script) and script[next_idx].t <= t:
            step_cmd = script[next_idx]
            if step_cmd.swa is not None:
                target_swa = step_cmd.swa
            if step_cmd.speed is not None:
                target_speed, target_fx = step_cmd.speed, None
            if step_cmd.fx is not None:
                target_fx, target_speed = step_cmd.fx, None
            next_idx += 1

        vx = state[3]
        if target_fx is not None:
            fx_req = target_fx
            speed_cmd = 0.0
        else:
            speed_cmd = target_speed if target_speed is not None else 0.0
            fx_req = 0.0

        rate_req = (target_swa - swa) / dt
        accel_req = fx_req / p.m if target_fx is not None else 0.0
        cmd, flags = limit_command(mode, Command(speed_target=speed_cmd,
                                                 swa_rate=rate_req,
                                                 accel=accel_req))
        for ch in ("speed_target", "swa_rate", "accel"):
            if flags[ch]:
                clamp_counts[ch] += 1
        swa = swa + cmd.swa_rate * dt
        delta = swa / p.steering_ratio
        if math.isfinite(mode.max_lat_accel) and vx > 1.0:
            delta_cap = mode.max_lat_accel * p.wheelbase / (vx * vx)
            if abs(delta) > delta_cap:
                delta = math.copysign(delta_cap, delta)
                clamp_counts["lat_accel"] += 1

        if target_fx is not None:
            fx = cmd.accel * p.m
        else:
            fx = config.kp_speed * (cmd.speed_target - vx) + ff0 + ff2 * cmd.speed_target ** 2
            accel_lim_hi = mode.max_accel * p.m if math.isfinite(mode.max_accel) else fx_cap
            accel_lim_lo = -mode.max_decel * p.m if math.isfinite(mode.max_decel) else -fx_cap
            clamped_fx, clamped = _clamp(fx, accel_lim_lo, accel_lim_hi)
            if clamped:
                clamp_counts["accel"] += 1
            fx = clamped_fx
        fx, _ = _clamp(fx, -fx_cap, fx_cap)

        state = kernel.step_once(state, delta, fx, dt, veh, tire)
        if not all(math.isfinite(v) for v in state):
            raise DivergenceError((k + 1) * dt)
        traj[k + 1] = ((k + 1) * dt, *state)

    summary = {
        "steps": n_steps,
        "final_x_m": traj[-1, 1],
        "final_y_m": traj[-1, 2],
        "final_psi_rad": traj[-1, 3],
        "final_speed_mps": traj[-1, 4],
        "distance_m": float(np.sum(np.hypot(np.diff(traj[:, 1]), np.diff(traj[:, 2])))),
        "max_speed_mps": float(np.max(traj[:, 4])),
    }
    return traj, summary, clamp_counts


def _ingest_ride(config: ScenarioConfig, rig, traj, ptp_traces) -> tuple[RideStore, str]:
    """Build the ride store from the trajectory and sensor timestamps."""
    store = RideStore()
    map_id = store.add_map(MapRecord(id="map-0001", name="virtual-proving-ground",
                                     reference="map://default"))
    ride_id = "ride-0001"
    store.create_ride(Ride(id=ride_id, start=0.0, end=config.duration,
                           vehicle_ref="vehicle", rig_ref=config.rig_ref,
                           source="simulation", map_id=map_id))

    units: dict[str, float] = {}
    unit_pose: dict[str, tuple] = {}
    for spec, pose in rig.sensors:
        if spec.unit not in units or spec.rate > units[spec.unit]:
            units[spec.unit] = spec.rate
            unit_pose[spec.unit] = (pose.x, pose.y, pose.z, pose.roll, pose.pitch, pose.yaw)
    for i, unit in enumerate(sorted(units)):
        store.add_calibrated_sensor(CalibratedSensor(
            id=f"cs-{i:04d}", ride_id=ride_id, sensor_id=unit,
            extrinsic=unit_pose[unit]))

    # Nominal emissions at each sensor rate, timestamped by that unit's
    # synchronized clock (offset interpolated from the sync traces).
    measurements: dict[str, list[float]] = {}
    for unit, rate in units.items():
        n = int(math.floor(config.duration * rate))
        nominal = [k / rate for k in range(n + 1) if k / rate < config.duration]
        if ptp_traces is not None and unit in ptp_traces.offsets_abs:
            offs = np.interp(nominal, ptp_traces.times, ptp_traces.offsets_abs[unit])
            measurements[unit] = [t + o for t, o in zip(nominal, offs)]
        else:
            measurements[unit] = nominal

    fastest = max(units.values())
    tolerance = 0.5 / fastest
    anchor = pick_anchor(measurements)
    aligned = align_with_assignments(measurements, tolerance, anchor=anchor)

    scenes = segment_windows(0.0, config.duration, config.scene_duration)
    scene_ids = []
    for j, (s, e) in enumerate(scenes):
        scene_ids.append(store.add_scene(Scene(id=f"scene-{j:04d}", ride_id=ride_id,
                                               start=s, end=e)))

    times = traj[:, 0]
    sample_n = 0
    data_n = 0
    poses_by_scene: dict[str, list[EgoPose]] = {sid: [] for sid in scene_ids}
    for t_anchor, picks in aligned:
        if not 0.0 <= t_anchor < config.duration:
            continue
        idx = None
        for j, (s, e) in enumerate(scenes):
            if s <= t_anchor < e:
                idx = j
                break
        if idx is None:
            continue
        sample_id = f"sample-{sample_n:06d}"
        sample_n += 1
        store.add_sample(Sample(id=sample_id, scene_id=scene_ids[idx],
                                timestamp=t_anchor))
        for unit in sorted(picks):
            store.add_sample_data(SampleData(
                id=f"sd-{data_n:08d}", sample_id=sample_id, sensor_id=unit,
                timestamp=picks[unit],
                payload_ref=f"sim://{unit}/{sample_id}"))
            data_n += 1
        cols = [np.interp(t_anchor, times, traj[:, c]) for c in range(1, 7)]
        pose = EgoPose(sample_id=sample_id, x=float(cols[0]), y=float(cols[1]),
                       psi=float(cols[2]), v_x=float(cols[3]), v_y=float(cols[4]),
                       psi_dot=float(cols[5]))
        store.add_ego_pose(pose)
        poses_by_scene[scene_ids[idx]].append(pose)

    for sid in scene_ids:
        for tag in auto_tags(poses_by_scene[sid], rig):
            store.add_tag(sid, tag)
    return store, ride_id


def run_scenario(config: ScenarioConfig) -> ScenarioReport:
    """Execute every enabled subsystem and assemble the report."""
    t_wall = time.time()
    report = ScenarioReport(name=config.name, effective_config=config.effective_dict(),
                            seed=config.seed)

    traj, summary, clamps = _run_dynamics(config)
    report.trajectory = traj
    report.dynamics_summary = summary
    report.clamp_events = clamps

    if config.iso_swa is not None:
        speeds = [v * KPH for v in range(5, 131, 5)]
        if config.iso_mode in ("discrete", "both"):
            report.iso_reports["discrete"] = run_iso4138_discrete(
                config.vehicle, config.tires, config.iso_swa, speeds)
        if config.iso_mode in ("continuous", "both"):
            report.iso_reports["continuous"] = run_iso4138_continuous(
                config.vehicle, config.tires, config.iso_swa)
        base = report.iso_reports.get("discrete") or report.iso_reports.get("continuous")
        try:
            report.understeer = understeer_gradient(base, config.vehicle)
        except InsufficientDataError:
            report.understeer = None

    rig = load_rig_ref(config.rig_ref)

    if config.coverage_enabled:
        cov = coverage_map(rig, Window.square(config.coverage_window),
                           config.coverage_cell, config.coverage_height)
        report.coverage = cov
        total = cov.total()
        outside = ~cov.footprint_mask
        regions = blind_spot_regions(rig, rig.modalities(),
                                     Window.square(config.coverage_window),
                                     config.coverage_cell, config.coverage_height,
                                     cov=cov)
        report.coverage_summary = {
            "cells": int(outside.sum()),
            "covered_cells": int((total[outside] > 0).sum()),
            "blind_cells": int((total[outside] == 0).sum()),
            "footprint_cells": int(cov.footprint_mask.sum()),
            "blind_regions": len(regions),
            "largest_blind_area_m2": regions[0].area_m2 if regions else 0.0,
        }

    ptp_traces = None
    if config.ptp_enabled:
        topo = vehicle_sync_topology(sorted(rig.units()),
                                     drift_gm=config.ptp_drift,
                                     drift_others=config.ptp_drift,
                                     noise_sigma=config.ptp_noise_sigma)
        ptp_traces = run_sync_simulation(topo, config.duration,
                                         config.ptp_sync_interval, seed=config.seed)
        report.ptp_traces = ptp_traces
        worst = max((v["steady_rms_offset_s"] for k, v in ptp_traces.summary.items()
                     if k != "gm"), default=0.0)
        report.ptp_summary = {
            "nodes": len(ptp_traces.offsets_to_gm),
            "worst_steady_rms_s": worst,
            "worst_max_abs_s": max((v["max_abs_offset_s"]
                                    for k, v in ptp_traces.summary.items()
                                    if k != "gm"), default=0.0),
        }

    if config.network_enabled:
        topo = vehicle_topology(rig)
        flows = flows_from_rig(rig, topo)
        result = net_simulate(topo, flows, config.network_duration,
                              seed=config.seed + 1, shaping=config.network_shaping,
                              strict=False)
        report.net_result = result
        report.net_checks = [check_sr_class(result.stats[fid])
                             for fid in sorted(result.stats)]

    store, ride_id = _ingest_ride(config, rig, traj, ptp_traces)
    report.store = store
    report.ride_id = ride_id
    report.integrity = store.integrity_check()

    report.wall_clock_s = time.time() - t_wall
    return report
