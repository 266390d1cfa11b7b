import math

import pytest
from hypothesis import given, settings, strategies as st

from cartwin.dynamics import (
    DriveInput,
    LowSpeedError,
    VehicleParams,
    VehicleState,
    resistance_forces,
    slip_angles,
    state_derivative,
    static_axle_loads,
    step,
)
from cartwin.dynamics.model import tire_tuple, veh_tuple
from cartwin.dynamics.backend import kernel

# Frozen from 50-digit evaluations.
FZF_ORACLE = 10376.080915516661
FZR_ORACLE = 14345.119084483339
ALPHA_F_ORACLE = 0.0077850949243975756
DRAG_130KPH = 810.68817515432099


def test_static_axle_loads_frozen(params):
    loads = static_axle_loads(params)
    assert math.isclose(loads.F_z_f, FZF_ORACLE, rel_tol=1e-12)
    assert math.isclose(loads.F_z_r, FZR_ORACLE, rel_tol=1e-12)


def test_axle_loads_sum_to_weight(params):
    loads = static_axle_loads(params)
    assert math.isclose(loads.total, params.m * params.g, rel_tol=1e-9)


def test_symmetric_geometry_splits_evenly():
    p = VehicleParams(l_f=1.5, l_r=1.5)
    loads = static_axle_loads(p)
    assert math.isclose(loads.F_z_f, loads.F_z_r, rel_tol=1e-15)
    assert math.isclose(loads.F_z_f, p.m * p.g / 2.0, rel_tol=1e-15)


def test_zero_mass_rejected_at_construction():
    with pytest.raises(ValueError):
        VehicleParams(m=0.0)


def test_slip_angles_straight_running(params):
    st_ = VehicleState(v_x=20.0)
    af, ar = slip_angles(st_, 0.05, params)
    assert af == 0.05
    assert ar == 0.0


def test_slip_angles_frozen_example(params):
    st_ = VehicleState(v_x=20.0, v_y=0.5, psi_dot=0.2)
    af, _ = slip_angles(st_, 0.05, params)
    assert math.isclose(af, ALPHA_F_ORACLE, rel_tol=1e-12)


@given(vy=st.floats(-3, 3), r=st.floats(-1, 1), delta=st.floats(-0.3, 0.3))
def test_slip_angle_odd_symmetry(vy, r, delta):
    p = VehicleParams()
    s1 = VehicleState(v_x=15.0, v_y=vy, psi_dot=r)
    s2 = VehicleState(v_x=15.0, v_y=-vy, psi_dot=-r)
    af1, ar1 = slip_angles(s1, delta, p)
    af2, ar2 = slip_angles(s2, -delta, p)
    assert math.isclose(af1, -af2, abs_tol=1e-15)
    assert math.isclose(ar1, -ar2, abs_tol=1e-15)


def test_slip_angles_guard(params):
    with pytest.raises(LowSpeedError):
        slip_angles(VehicleState(v_x=0.3), 0.0, params)


def test_resistance_forces(params):
    drag, roll = resistance_forces(VehicleState(v_x=130.0 / 3.6), params)
    assert math.isclose(drag, DRAG_130KPH, rel_tol=1e-12)
    assert math.isclose(roll, params.f_r * params.m * params.g, rel_tol=1e-15)
    # standstill: both zero
    assert resistance_forces(VehicleState(), params) == (0.0, 0.0)
    # quadratic law
    d1, _ = resistance_forces(VehicleState(v_x=10.0), params)
    d2, _ = resistance_forces(VehicleState(v_x=20.0), params)
    assert math.isclose(d2, 4.0 * d1, rel_tol=1e-12)


def test_equilibrium_straight_driving(params, tires):
    s = VehicleState(v_x=25.0)
    drag, roll = resistance_forces(s, params)
    d = state_derivative(s, DriveInput(0.0, drag + roll), params, tires)
    assert d.v_x == 0.0 and d.v_y == 0.0 and d.psi_dot == 0.0
    assert d.x == 25.0 and d.y == 0.0 and d.psi == 0.0


def test_zero_state_zero_input_zero_derivative(params, tires):
    d = state_derivative(VehicleState(), DriveInput(), params, tires)
    assert d.as_tuple() == (0.0,) * 6


@settings(max_examples=30, deadline=None)
@given(vx=st.floats(3.0, 35.0), vy=st.floats(-2.0, 2.0), r=st.floats(-0.5, 0.5),
       delta=st.floats(-0.1, 0.1), fx=st.floats(-3000.0, 3000.0))
def test_derivative_matches_finite_difference(vx, vy, r, delta, fx):
    """Richardson-extrapolated finite differences of short integrations
    reproduce the analytic derivative to second order in the step."""
    from cartwin.dynamics import AxleTires

    p, t = VehicleParams(), AxleTires()
    s = VehicleState(x=1.0, y=-2.0, psi=0.3, v_x=vx, v_y=vy, psi_dot=r)
    inp = DriveInput(delta, fx)
    d = state_derivative(s, inp, p, t)
    h = 2e-5
    x_h = step(s, inp, h, p, t).as_tuple()
    x_h2 = step(s, inp, h / 2, p, t).as_tuple()
    s0 = s.as_tuple()
    for i in range(6):
        d_h = (x_h[i] - s0[i]) / h
        d_h2 = (x_h2[i] - s0[i]) / (h / 2)
        fd = 2.0 * d_h2 - d_h  # cancels the O(h) term
        assert math.isclose(fd, d.as_tuple()[i], rel_tol=1e-5, abs_tol=1e-7)


def test_step_equilibrium_advances_only_x(params, tires):
    s = VehicleState(v_x=20.0)
    drag, roll = resistance_forces(s, params)
    out = step(s, DriveInput(0.0, drag + roll), 0.001, params, tires)
    assert math.isclose(out.x, 0.02, rel_tol=1e-12)
    assert out.y == 0.0 and out.psi == 0.0
    assert math.isclose(out.v_x, 20.0, rel_tol=1e-12)
    assert out.v_y == 0.0 and out.psi_dot == 0.0


def test_step_rejects_large_dt(params, tires):
    with pytest.raises(ValueError):
        step(VehicleState(v_x=5.0), DriveInput(), 0.02, params, tires)


def test_richardson_halving_dt(params, tires):
    """Halving dt shrinks the trajectory error roughly 16x (4th order)."""
    veh, tire = veh_tuple(params), tire_tuple(params, tires)
    ctrl = (1, 0.0, 0.05, 0.5, 20.0, 0.0, 5000.0, 40000.0,
            params.f_r * params.m * params.g, 0.5 * params.rho * params.c_d * params.A)
    s0 = (0.0, 0.0, 0.0, 20.0, 0.0, 0.0)
    T = 2.0

    def final_state(dt):
        _, states, _, ok = kernel.simulate(s0, veh, tire, ctrl, dt, int(round(T / dt)))
        assert ok
        return states[-1]

    ref = final_state(1e-4)

    def err(dt):
        out = final_state(dt)
        return max(abs(a - b) for a, b in zip(out, ref))

    ratio = err(4e-3) / err(2e-3)
    assert 8.0 < ratio < 32.0


def test_low_speed_yaw_converges_to_kinematic(params, tires):
    """Constant small steering at 2 m/s settles near v*delta/L."""
    veh, tire = veh_tuple(params), tire_tuple(params, tires)
    delta = 0.04
    ctrl = (0, delta, 0.0, 0.0, 2.0, 0.0, 5000.0, 40000.0,
            params.f_r * params.m * params.g, 0.5 * params.rho * params.c_d * params.A)
    s0 = (0.0, 0.0, 0.0, 2.0, 0.0, 0.0)
    _, states, _, ok = kernel.simulate(s0, veh, tire, ctrl, 1e-3, 15000)
    assert ok
    yaw = states[-1, 5]
    kin = 2.0 * delta / params.wheelbase
    assert abs(yaw - kin) / kin < 0.02


def test_divergence_reported(params, tires):
    from cartwin.dynamics import DivergenceError

    bad = VehicleParams(I_z=1e-6)  # absurd inertia destabilizes integration
    s = VehicleState(v_x=30.0)
    with pytest.raises((DivergenceError, ValueError)):
        cur = s
        for k in range(2000):
            cur = step(cur, DriveInput(0.5, 0.0), 0.01, bad, tires, t=k * 0.01)
