"""Steady-state circular driving tests (constant steering-wheel angle).

Two procedure variants: discrete speed steps, each held until the yaw rate
settles, and a slow continuous speed ramp sampled at checkpoint speeds.
Both produce the same report shape, from which the understeer gradient is
extracted over the linear lateral-acceleration range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .backend import kernel
from .model import tire_tuple, veh_tuple
from .params import AxleTires, VehicleParams

KPH = 1.0 / 3.6
SPEED_ENVELOPE = (5.0 * KPH, 130.0 * KPH)
SWA_MAX = math.radians(540.0)

DEFAULT_KP_SPEED = 5000.0
SETTLE_WINDOW_S = 2.0
SETTLE_TOL = 1e-4
TIME_BUDGET_S = 60.0
CHUNK_S = 1.0

CSV_HEADER = "speed_mps,swa_rad,yawrate_radps,ay_mps2,radius_m,sideslip_rad,converged"


@dataclass(frozen=True)
class SteadyStatePoint:
    speed_mps: float
    swa_rad: float
    yawrate_radps: float
    ay_mps2: float
    radius_m: float
    sideslip_rad: float
    converged: bool


@dataclass(frozen=True)
class SteadyStateReport:
    procedure: str
    points: tuple[SteadyStatePoint, ...]

    def converged_points(self) -> list[SteadyStatePoint]:
        return [p for p in self.points if p.converged]

    def to_csv(self) -> str:
        lines = [CSV_HEADER]
        for p in self.points:
            lines.append(
                f"{p.speed_mps:.10g},{p.swa_rad:.10g},{p.yawrate_radps:.10g},"
                f"{p.ay_mps2:.10g},{p.radius_m:.10g},{p.sideslip_rad:.10g},"
                f"{'true' if p.converged else 'false'}"
            )
        return "\n".join(lines) + "\n"


class InsufficientDataError(ValueError):
    """Not enough converged points for the requested extraction."""


def _validate_inputs(steering_wheel_angle: float, speeds) -> None:
    if not math.isfinite(steering_wheel_angle) or abs(steering_wheel_angle) > SWA_MAX:
        raise ValueError(
            f"steering-wheel angle {steering_wheel_angle!r} outside |swa| <= 540 deg"
        )
    for v in speeds:
        if not (math.isfinite(v) and 0.0 < v <= 2.0 * SPEED_ENVELOPE[1]):
            raise ValueError(f"speed {v!r} m/s outside the supported range")


def _feedforward(params: VehicleParams) -> tuple[float, float]:
    return (params.f_r * params.m * params.g,
            0.5 * params.rho * params.c_d * params.A)


def _fx_cap(tire: tuple) -> float:
    return tire[2] + tire[6]


def _point_from_state(state, swa: float, converged: bool) -> SteadyStatePoint:
    """Build a report point from the settled state; the recorded speed is the
    actual longitudinal speed so a_y = v * yaw rate and radius * yaw rate = v
    hold as identities."""
    vx, vy, yaw_rate = float(state[3]), float(state[4]), float(state[5])
    ay = vx * yaw_rate
    radius = vx / yaw_rate if abs(yaw_rate) > 1e-12 else math.inf
    sideslip = math.atan2(vy, vx) if vx > 0.0 else 0.0
    return SteadyStatePoint(
        speed_mps=vx, swa_rad=swa, yawrate_radps=yaw_rate,
        ay_mps2=ay, radius_m=radius, sideslip_rad=sideslip, converged=converged,
    )


def _first_settled_index(yaw: np.ndarray, window: int, tol: float) -> int:
    """First sample whose trailing window has yaw-rate std below tol, or -1."""
    n = yaw.size
    if n <= window:
        return -1
    c1 = np.concatenate(([0.0], np.cumsum(yaw)))
    c2 = np.concatenate(([0.0], np.cumsum(yaw * yaw)))
    idx = np.arange(window, n)
    mean = (c1[idx + 1] - c1[idx + 1 - window]) / window
    var = (c2[idx + 1] - c2[idx + 1 - window]) / window - mean * mean
    hits = np.nonzero(var < tol * tol)[0]
    if hits.size == 0:
        return -1
    return int(idx[hits[0]])


def run_iso4138_discrete(
    params: VehicleParams,
    tires: AxleTires,
    steering_wheel_angle: float,
    speeds,
    *,
    dt: float = 1e-3,
    kp_speed: float = DEFAULT_KP_SPEED,
    time_budget_s: float = TIME_BUDGET_S,
    settle_tol: float = SETTLE_TOL,
) -> SteadyStateReport:
    """Discrete speed-step variant: one settled circle per requested speed.

    Each point regulates longitudinal force to hold the commanded speed with
    the road-wheel angle fixed at ``steering_wheel_angle / steering_ratio``,
    and is recorded once the yaw rate's moving std over 2 s drops below the
    settle tolerance. Points that do not settle within the time budget are
    flagged ``converged=False`` (typically past the stable handling limit).
    """
    speeds = sorted(float(v) for v in speeds)
    _validate_inputs(steering_wheel_angle, speeds)
    veh = veh_tuple(params)
    tire = tire_tuple(params, tires)
    delta = steering_wheel_angle / params.steering_ratio
    ff0, ff2 = _feedforward(params)
    fx_max = _fx_cap(tire)
    window = int(round(SETTLE_WINDOW_S / dt))
    chunk_steps = int(round(CHUNK_S / dt))
    budget_steps = int(round(time_budget_s / dt))

    points = []
    for v_cmd in speeds:
        ctrl = (0, delta, 0.0, 0.0, v_cmd, 0.0, kp_speed, fx_max, ff0, ff2)
        state = (0.0, 0.0, 0.0, v_cmd, 0.0, 0.0)
        yaw = np.empty(0)
        final_state = state
        settled = -1
        diverged = False
        done = 0
        while done < budget_steps and settled < 0 and not diverged:
            n = min(chunk_steps, budget_steps - done)
            times, states, n_done, ok = kernel.simulate(final_state, veh, tire, ctrl, dt, n)
            yaw = np.concatenate((yaw, states[1:, 5]))
            settled = _first_settled_index(yaw, window, settle_tol)
            if settled >= 0:
                # yaw[i] is the sample after step i+1 of the whole run
                local = settled - (yaw.size - states.shape[0] + 1)
                final_state = tuple(states[local + 1])
            else:
                final_state = tuple(states[-1])
            done += n_done
            diverged = not ok
        points.append(_point_from_state(final_state, steering_wheel_angle,
                                        converged=settled >= 0))
    return SteadyStateReport(procedure="discrete", points=tuple(points))


def run_iso4138_continuous(
    params: VehicleParams,
    tires: AxleTires,
    steering_wheel_angle: float,
    accel_rate: float = 0.1,
    speeds=None,
    *,
    dt: float = 1e-3,
    kp_speed: float = DEFAULT_KP_SPEED,
) -> SteadyStateReport:
    """Continuous speed-ramp variant sampled at checkpoint speeds.

    A single run ramps the commanded speed at ``accel_rate`` between the
    smallest and largest checkpoint; each checkpoint records the quasi-steady
    state at the moment the command crosses it. The slower the ramp, the
    closer the values are to the discrete variant.
    """
    if speeds is None:
        speeds = [v * KPH for v in range(5, 131, 5)]
    speeds = sorted(float(v) for v in speeds)
    _validate_inputs(steering_wheel_angle, speeds)
    if not (0.0 < accel_rate <= 1.0):
        raise ValueError("accel_rate must be in (0, 1] m/s^2 for quasi-steady ramps")
    veh = veh_tuple(params)
    tire = tire_tuple(params, tires)
    delta = steering_wheel_angle / params.steering_ratio
    ff0, ff2 = _feedforward(params)
    fx_max = _fx_cap(tire)

    v0, v1 = speeds[0], speeds[-1]
    # Hold the lowest speed for a lead-in so transients die before the ramp.
    lead_s = 10.0
    ramp_s = (v1 - v0) / accel_rate
    lead_steps = int(round(lead_s / dt))
    ramp_steps = int(math.ceil(ramp_s / dt))

    state = (0.0, 0.0, 0.0, v0, 0.0, 0.0)
    ctrl_hold = (0, delta, 0.0, 0.0, v0, 0.0, kp_speed, fx_max, ff0, ff2)
    _, states, _, ok = kernel.simulate(state, veh, tire, ctrl_hold, dt, lead_steps)
    state = tuple(states[-1])
    points: list[SteadyStatePoint] = []
    if not ok:
        return SteadyStateReport(
            procedure="continuous",
            points=tuple(_point_from_state(state, steering_wheel_angle, False)
                         for _ in speeds),
        )

    ctrl_ramp = (0, delta, 0.0, 0.0, v0, accel_rate, kp_speed, fx_max, ff0, ff2)
    times, states, n_done, ok = kernel.simulate(state, veh, tire, ctrl_ramp, dt, ramp_steps)
    for v_cmd in speeds:
        k = int(math.ceil((v_cmd - v0) / (accel_rate * dt)))
        if k > n_done:
            points.append(_point_from_state(states[-1], steering_wheel_angle, False))
            continue
        st = tuple(states[k])
        quasi_steady = ok or k < n_done
        # Guard against controller loss of tracking near the stability limit.
        if abs(st[3] - v_cmd) > 0.05 * v_cmd:
            quasi_steady = False
        points.append(_point_from_state(st, steering_wheel_angle, quasi_steady))
    return SteadyStateReport(procedure="continuous", points=tuple(points))


def understeer_gradient(report: SteadyStateReport, params: VehicleParams,
                        ay_max: float = 4.0) -> float:
    """Least-squares slope of required steer beyond Ackermann versus a_y.

    Uses converged points with 0 < a_y <= ay_max (the linear range); the
    required road-wheel angle is the held ``swa / steering_ratio`` and the
    Ackermann angle is wheelbase / path radius.

    Returns:
        K_us [rad per m/s^2]; positive means understeer.
    """
    L = params.wheelbase
    xs, ys = [], []
    for p in report.converged_points():
        if not (0.0 < p.ay_mps2 <= ay_max and math.isfinite(p.radius_m)):
            continue
        delta_req = p.swa_rad / params.steering_ratio
        xs.append(p.ay_mps2)
        ys.append(delta_req - L / p.radius_m)
    if len(xs) < 3:
        raise InsufficientDataError(
            f"need >= 3 converged points with 0 < a_y <= {ay_max}, got {len(xs)}"
        )
    slope, _ = np.polyfit(np.asarray(xs), np.asarray(ys), 1)
    return float(slope)
