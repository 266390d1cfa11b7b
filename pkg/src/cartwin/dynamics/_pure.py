"""Pure-Python dynamics kernel.

Import-time fallback for the compiled kernel in ``_core.pyx``. The two
implementations keep identical arithmetic, expression order included, so the
backends agree to the last few ulps; tests hold them to 1e-12 relative.

Parameter packing shared by both backends:

veh  = (l_f, l_r, m, I_z, rho, A, c_d, f_r, g,
        drive_split_front, v_x_guard, kin_relax_tau)
tire = (B_f, C_f, D_f, E_f, B_r, C_r, D_r, E_r)       # D is the peak force [N]
ctrl = (delta_mode, delta0, sine_amp, sine_freq, v_target0, v_target_rate,
        kp_speed, fx_max, ff0, ff2)                   # delta_mode: 0 const, 1 sine

The drive force is a proportional speed regulator with a resistance
feedforward evaluated at the target speed:
fx = kp_speed * (v_target(t) - v_x) + ff0 + ff2 * v_target(t)^2.

State vector: (x, y, psi, v_x, v_y, psi_dot).
"""

from __future__ import annotations

import math

import numpy as np

BACKEND_NAME = "python"

_TWO_PI = 6.283185307179586476925287


def _magic(alpha, B, C, D, E):
    x = B * alpha
    return D * math.sin(C * math.atan(x - E * (x - math.atan(x))))


def derivative(state, delta, fx, veh, tire):
    """Time derivative of the state under constant steering and drive force."""
    (l_f, l_r, m, I_z, rho, A, c_d, f_r, g,
     split, v_guard, tau) = veh
    B_f, C_f, D_f, E_f, B_r, C_r, D_r, E_r = tire
    x, y, psi, vx, vy, r = state

    fxf = split * fx
    if fxf > D_f:
        fxf = D_f
    elif fxf < -D_f:
        fxf = -D_f
    fxr = (1.0 - split) * fx
    if fxr > D_r:
        fxr = D_r
    elif fxr < -D_r:
        fxr = -D_r
    fx_eff = fxf + fxr

    drag = 0.5 * rho * c_d * A * vx * abs(vx)
    if vx > 0.0:
        froll = f_r * m * g
    elif vx < 0.0:
        froll = -f_r * m * g
    else:
        froll = 0.0

    if vx >= v_guard:
        alpha_f = delta - math.atan((vy + l_f * r) / vx)
        alpha_r = -math.atan((vy - l_r * r) / vx)
        rat_f = fxf / D_f
        rat_r = fxr / D_r
        scale_f = math.sqrt(max(0.0, 1.0 - rat_f * rat_f))
        scale_r = math.sqrt(max(0.0, 1.0 - rat_r * rat_r))
        fyf = scale_f * _magic(alpha_f, B_f, C_f, D_f, E_f)
        fyr = scale_r * _magic(alpha_r, B_r, C_r, D_r, E_r)
        sd = math.sin(delta)
        cd_ = math.cos(delta)
        dvx = (fx_eff - drag - froll - fyf * sd) / m + vy * r
        dvy = (fyf * cd_ + fyr) / m - vx * r
        dr = (l_f * fyf * cd_ - l_r * fyr) / I_z
    else:
        # Low-speed regime: slip angles are singular; relax the lateral
        # states onto the kinematic single-track solution instead.
        dvx = (fx_eff - drag - froll) / m + vy * r
        L = l_f + l_r
        td = math.tan(delta)
        r_kin = vx * td / L
        vy_kin = l_r * r_kin
        dr = (r_kin - r) / tau + dvx * td / L
        dvy = (vy_kin - vy) / tau + l_r * dvx * td / L

    cpsi = math.cos(psi)
    spsi = math.sin(psi)
    return (vx * cpsi - vy * spsi,
            vx * spsi + vy * cpsi,
            r,
            dvx,
            dvy,
            dr)


def step_once(state, delta, fx, dt, veh, tire):
    """One classic fourth-order Runge-Kutta step with inputs held constant."""
    h = dt
    s = state
    k1 = derivative(s, delta, fx, veh, tire)
    s2 = tuple(s[i] + 0.5 * h * k1[i] for i in range(6))
    k2 = derivative(s2, delta, fx, veh, tire)
    s3 = tuple(s[i] + 0.5 * h * k2[i] for i in range(6))
    k3 = derivative(s3, delta, fx, veh, tire)
    s4 = tuple(s[i] + h * k3[i] for i in range(6))
    k4 = derivative(s4, delta, fx, veh, tire)
    return tuple(s[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
                 for i in range(6))


def _controls(t, vx, ctrl):
    (delta_mode, delta0, amp, freq, vt0, vt_rate, kp, fx_max, ff0, ff2) = ctrl
    if delta_mode == 1:
        delta = amp * math.sin(_TWO_PI * freq * t)
    else:
        delta = delta0
    vt = vt0 + vt_rate * t
    fx = kp * (vt - vx) + ff0 + ff2 * vt * vt
    if fx > fx_max:
        fx = fx_max
    elif fx < -fx_max:
        fx = -fx_max
    return delta, fx


def simulate(state0, veh, tire, ctrl, dt, n_steps, stride=1):
    """Fixed-step RK4 run with steered/speed-regulated inputs.

    Steering and speed target are evaluated continuously in time (also at
    the RK4 substeps), keeping fourth-order convergence for smooth inputs.

    Returns:
        (times, states, n_done, ok): recorded sample times, the matching
        (n_rec, 6) state array, the number of steps completed, and False if
        the state went non-finite (run stops at the offending step).
    """
    n_rec = n_steps // stride + 1
    times = np.empty(n_rec)
    states = np.empty((n_rec, 6))
    s = tuple(float(v) for v in state0)
    times[0] = 0.0
    states[0] = s
    rec = 1
    h = dt
    for k in range(n_steps):
        t = k * h
        d1, f1 = _controls(t, s[3], ctrl)
        k1 = derivative(s, d1, f1, veh, tire)
        s2 = tuple(s[i] + 0.5 * h * k1[i] for i in range(6))
        d2, f2 = _controls(t + 0.5 * h, s2[3], ctrl)
        k2 = derivative(s2, d2, f2, veh, tire)
        s3 = tuple(s[i] + 0.5 * h * k2[i] for i in range(6))
        d3, f3 = _controls(t + 0.5 * h, s3[3], ctrl)
        k3 = derivative(s3, d3, f3, veh, tire)
        s4 = tuple(s[i] + h * k3[i] for i in range(6))
        d4, f4 = _controls(t + h, s4[3], ctrl)
        k4 = derivative(s4, d4, f4, veh, tire)
        s = tuple(s[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
                  for i in range(6))
        ok = True
        for v in s:
            if not math.isfinite(v):
                ok = False
                break
        if not ok:
            return times[:rec], states[:rec], k, False
        if (k + 1) % stride == 0:
            times[rec] = (k + 1) * h
            states[rec] = s
            rec += 1
    return times[:rec], states[:rec], n_steps, True
