import math

import numpy as np
import pytest
from scipy.optimize import fsolve

from cartwin.dynamics import (
    AxleTires,
    InsufficientDataError,
    SteadyStatePoint,
    SteadyStateReport,
    VehicleParams,
    pacejka_lateral_force,
    run_iso4138_continuous,
    run_iso4138_discrete,
    static_axle_loads,
    understeer_gradient,
)
from cartwin.dynamics.iso4138 import CSV_HEADER

KPH = 1.0 / 3.6
KIN_YAW_ORACLE = 0.023374097759826471  # 1.389 m/s * 0.05 rad / 2.971 m


def steady_state_oracle(params, tires, delta, vx):
    """Root-find the analytic equilibrium (v_y, yaw rate, drive force).

    Independent of the integrator: solves the lateral/yaw/longitudinal
    balance directly, including the friction-ellipse coupling.
    """
    loads = static_axle_loads(params)
    D_f = tires.front.D_scale * loads.F_z_f
    D_r = tires.rear.D_scale * loads.F_z_r
    split = params.drive_split_front

    def eqs(x):
        vy, r, fx = x
        fxf = np.clip(split * fx, -D_f, D_f)
        fxr = np.clip((1 - split) * fx, -D_r, D_r)
        sf = math.sqrt(max(0.0, 1 - (fxf / D_f) ** 2))
        sr = math.sqrt(max(0.0, 1 - (fxr / D_r) ** 2))
        af = delta - math.atan((vy + params.l_f * r) / vx)
        ar = -math.atan((vy - params.l_r * r) / vx)
        fyf = sf * pacejka_lateral_force(af, tires.front, loads.F_z_f)
        fyr = sr * pacejka_lateral_force(ar, tires.rear, loads.F_z_r)
        drag = 0.5 * params.rho * params.c_d * params.A * vx * vx
        roll = params.f_r * params.m * params.g
        return [
            (fyf * math.cos(delta) + fyr) / params.m - vx * r,
            (params.l_f * fyf * math.cos(delta) - params.l_r * fyr) / params.I_z,
            (fxf + fxr - drag - roll - fyf * math.sin(delta)) / params.m,
        ]

    guess = [0.0, vx * delta / params.wheelbase, 500.0]
    sol, info, ier, _ = fsolve(eqs, guess, full_output=True)
    return sol if ier == 1 else None


def test_kinematic_limit_point(params, tires):
    swa = 0.05 * params.steering_ratio
    rep = run_iso4138_discrete(params, tires, swa, [5.0 * KPH])
    pt = rep.points[0]
    assert pt.converged
    assert abs(pt.yawrate_radps - KIN_YAW_ORACLE) / KIN_YAW_ORACLE < 0.02


def test_zero_steering_gives_zero_yaw(params, tires):
    rep = run_iso4138_discrete(params, tires, 0.0, [30.0 * KPH])
    pt = rep.points[0]
    assert pt.converged
    assert abs(pt.yawrate_radps) < 1e-9
    assert math.isinf(pt.radius_m)


def test_points_sorted_by_speed(params, tires):
    rep = run_iso4138_discrete(params, tires, 0.3, [40 * KPH, 10 * KPH, 20 * KPH])
    speeds = [p.speed_mps for p in rep.points]
    assert speeds == sorted(speeds)


def test_steady_state_against_equilibrium_oracle(params, tires):
    """Settled circles match the analytic equilibrium root within 0.5%."""
    swa = math.radians(45.0)
    delta = swa / params.steering_ratio
    rep = run_iso4138_discrete(params, tires, swa, [20 * KPH, 40 * KPH, 60 * KPH])
    for pt in rep.points:
        assert pt.converged
        sol = steady_state_oracle(params, tires, delta, pt.speed_mps)
        assert sol is not None
        vy_ref, r_ref, _ = sol
        assert abs(pt.yawrate_radps - r_ref) / abs(r_ref) < 5e-3
        assert abs(pt.sideslip_rad - math.atan2(vy_ref, pt.speed_mps)) < 2e-3


def test_steady_state_consistency_invariants(params, tires):
    rep = run_iso4138_discrete(params, tires, math.radians(45.0),
                               [v * KPH for v in (10, 30, 50, 70)])
    assert any(pt.converged for pt in rep.points)
    for pt in rep.points:
        if not pt.converged:
            continue
        assert abs(pt.ay_mps2 - pt.speed_mps * pt.yawrate_radps) <= 1e-3
        assert abs(pt.radius_m * pt.yawrate_radps - pt.speed_mps) <= 1e-3


def test_continuous_matches_discrete(params, tires):
    swa = math.radians(45.0)
    speeds = [v * KPH for v in (10, 20, 30, 40, 50)]
    disc = run_iso4138_discrete(params, tires, swa, speeds)
    cont = run_iso4138_continuous(params, tires, swa, accel_rate=0.1, speeds=speeds)
    for pd, pc in zip(disc.points, cont.points):
        assert math.isclose(pd.speed_mps, pc.speed_mps, rel_tol=0.02)
        if pd.converged and pc.converged:
            assert abs(pc.yawrate_radps - pd.yawrate_radps) / abs(pd.yawrate_radps) < 0.03


def test_continuous_zero_steering(params, tires):
    rep = run_iso4138_continuous(params, tires, 0.0, accel_rate=0.5,
                                 speeds=[10 * KPH, 20 * KPH, 30 * KPH])
    for pt in rep.points:
        assert abs(pt.yawrate_radps) < 1e-9
    speeds = [p.speed_mps for p in rep.points]
    assert speeds == sorted(speeds)


def test_swa_envelope_enforced(params, tires):
    with pytest.raises(ValueError):
        run_iso4138_discrete(params, tires, math.radians(600.0), [10 * KPH])
    with pytest.raises(ValueError):
        run_iso4138_discrete(params, tires, 0.3, [-1.0])


def _synthetic_report(kus, params, ays):
    """Report whose required steer is Ackermann plus kus * a_y, at v=15."""
    pts = []
    v = 15.0
    for ay in ays:
        r = ay / v
        radius = v / r
        delta = params.wheelbase / radius + kus * ay
        pts.append(SteadyStatePoint(
            speed_mps=v, swa_rad=delta * params.steering_ratio, yawrate_radps=r,
            ay_mps2=ay, radius_m=radius, sideslip_rad=0.0, converged=True))
    return SteadyStateReport(procedure="discrete", points=tuple(pts))


def test_understeer_gradient_neutral(params):
    rep = _synthetic_report(0.0, params, [0.5, 1.0, 2.0, 3.0])
    assert abs(understeer_gradient(rep, params)) < 1e-12


def test_understeer_gradient_recovers_injected_slope(params):
    rep = _synthetic_report(0.002, params, [0.5, 1.0, 2.0, 3.0, 3.5])
    assert math.isclose(understeer_gradient(rep, params), 0.002, abs_tol=1e-9)


def test_understeer_gradient_insufficient_points(params):
    rep = _synthetic_report(0.002, params, [0.5, 1.0])
    with pytest.raises(InsufficientDataError):
        understeer_gradient(rep, params)


def test_understeer_gradient_of_identified_vehicle(params, tires):
    """Sign and magnitude agree with the equilibrium-oracle gradient."""
    swa = math.radians(45.0)
    delta = swa / params.steering_ratio
    rep = run_iso4138_discrete(params, tires, swa,
                               [v * KPH for v in range(10, 75, 5)])
    kus_sim = understeer_gradient(rep, params)

    xs, ys = [], []
    for vx in np.linspace(8.0, 18.0, 8):
        sol = steady_state_oracle(params, tires, delta, vx)
        assert sol is not None
        _, r_ref, _ = sol
        ay = vx * r_ref
        if 0 < ay <= 4.0:
            xs.append(ay)
            ys.append(delta - params.wheelbase * r_ref / vx)
    kus_ref = float(np.polyfit(xs, ys, 1)[0])
    assert math.copysign(1.0, kus_sim) == math.copysign(1.0, kus_ref)
    assert abs(kus_sim - kus_ref) / abs(kus_ref) < 0.1


def test_csv_export_shape(params, tires):
    rep = run_iso4138_discrete(params, tires, 0.3, [10 * KPH, 20 * KPH])
    text = rep.to_csv()
    lines = text.strip().split("\n")
    assert lines[0] == CSV_HEADER
    assert len(lines) == 3
    assert lines[1].endswith(",true") or lines[1].endswith(",false")
