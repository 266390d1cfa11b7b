# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled dynamics kernel.

Mirrors ``_pure.py`` operation for operation; see that module for the
parameter packing. Keep the arithmetic in the same order in both files.
"""

from libc.math cimport sin, cos, tan, atan, sqrt, fabs, isfinite

import numpy as np

BACKEND_NAME = "compiled"

cdef double TWO_PI = 6.283185307179586476925287


cdef struct Veh:
    double l_f, l_r, m, I_z, rho, A, c_d, f_r, g, split, v_guard, tau


cdef struct Tire:
    double B_f, C_f, D_f, E_f, B_r, C_r, D_r, E_r


cdef struct Ctrl:
    int delta_mode
    double delta0, amp, freq, vt0, vt_rate, kp, fx_max, ff0, ff2


cdef inline double _magic(double alpha, double B, double C, double D, double E) nogil:
    cdef double x = B * alpha
    return D * sin(C * atan(x - E * (x - atan(x))))


cdef void _deriv(double* s, double delta, double fx, Veh* v, Tire* tp, double* out) nogil:
    cdef double x = s[0], y = s[1], psi = s[2], vx = s[3], vy = s[4], r = s[5]
    cdef double fxf, fxr, fx_eff, drag, froll
    cdef double alpha_f, alpha_r, rat_f, rat_r, scale_f, scale_r, fyf, fyr
    cdef double sd, cd_, dvx, dvy, dr, L, td, r_kin, vy_kin, cpsi, spsi, tmp

    fxf = v.split * fx
    if fxf > tp.D_f:
        fxf = tp.D_f
    elif fxf < -tp.D_f:
        fxf = -tp.D_f
    fxr = (1.0 - v.split) * fx
    if fxr > tp.D_r:
        fxr = tp.D_r
    elif fxr < -tp.D_r:
        fxr = -tp.D_r
    fx_eff = fxf + fxr

    drag = 0.5 * v.rho * v.c_d * v.A * vx * fabs(vx)
    if vx > 0.0:
        froll = v.f_r * v.m * v.g
    elif vx < 0.0:
        froll = -v.f_r * v.m * v.g
    else:
        froll = 0.0

    if vx >= v.v_guard:
        alpha_f = delta - atan((vy + v.l_f * r) / vx)
        alpha_r = -atan((vy - v.l_r * r) / vx)
        rat_f = fxf / tp.D_f
        rat_r = fxr / tp.D_r
        tmp = 1.0 - rat_f * rat_f
        scale_f = sqrt(tmp if tmp > 0.0 else 0.0)
        tmp = 1.0 - rat_r * rat_r
        scale_r = sqrt(tmp if tmp > 0.0 else 0.0)
        fyf = scale_f * _magic(alpha_f, tp.B_f, tp.C_f, tp.D_f, tp.E_f)
        fyr = scale_r * _magic(alpha_r, tp.B_r, tp.C_r, tp.D_r, tp.E_r)
        sd = sin(delta)
        cd_ = cos(delta)
        dvx = (fx_eff - drag - froll - fyf * sd) / v.m + vy * r
        dvy = (fyf * cd_ + fyr) / v.m - vx * r
        dr = (v.l_f * fyf * cd_ - v.l_r * fyr) / v.I_z
    else:
        dvx = (fx_eff - drag - froll) / v.m + vy * r
        L = v.l_f + v.l_r
        td = tan(delta)
        r_kin = vx * td / L
        vy_kin = v.l_r * r_kin
        dr = (r_kin - r) / v.tau + dvx * td / L
        dvy = (vy_kin - vy) / v.tau + v.l_r * dvx * td / L

    cpsi = cos(psi)
    spsi = sin(psi)
    out[0] = vx * cpsi - vy * spsi
    out[1] = vx * spsi + vy * cpsi
    out[2] = r
    out[3] = dvx
    out[4] = dvy
    out[5] = dr


cdef inline void _controls(double t, double vx, Ctrl* c, double* delta, double* fx) nogil:
    cdef double f, vt
    if c.delta_mode == 1:
        delta[0] = c.amp * sin(TWO_PI * c.freq * t)
    else:
        delta[0] = c.delta0
    vt = c.vt0 + c.vt_rate * t
    f = c.kp * (vt - vx) + c.ff0 + c.ff2 * vt * vt
    if f > c.fx_max:
        f = c.fx_max
    elif f < -c.fx_max:
        f = -c.fx_max
    fx[0] = f


cdef Veh _unpack_veh(tuple veh):
    cdef Veh v
    v.l_f = veh[0]; v.l_r = veh[1]; v.m = veh[2]; v.I_z = veh[3]
    v.rho = veh[4]; v.A = veh[5]; v.c_d = veh[6]; v.f_r = veh[7]
    v.g = veh[8]; v.split = veh[9]; v.v_guard = veh[10]; v.tau = veh[11]
    return v


cdef Tire _unpack_tire(tuple tire):
    cdef Tire t
    t.B_f = tire[0]; t.C_f = tire[1]; t.D_f = tire[2]; t.E_f = tire[3]
    t.B_r = tire[4]; t.C_r = tire[5]; t.D_r = tire[6]; t.E_r = tire[7]
    return t


def derivative(state, double delta, double fx, tuple veh, tuple tire):
    """Time derivative of the state under constant steering and drive force."""
    cdef Veh v = _unpack_veh(veh)
    cdef Tire tp = _unpack_tire(tire)
    cdef double s[6]
    cdef double out[6]
    cdef int i
    for i in range(6):
        s[i] = state[i]
    _deriv(s, delta, fx, &v, &tp, out)
    return (out[0], out[1], out[2], out[3], out[4], out[5])


cdef void _rk4_const(double* s, double delta, double fx, double h, Veh* v, Tire* tp) nogil:
    cdef double k1[6]
    cdef double k2[6]
    cdef double k3[6]
    cdef double k4[6]
    cdef double tmp[6]
    cdef int i
    _deriv(s, delta, fx, v, tp, k1)
    for i in range(6):
        tmp[i] = s[i] + 0.5 * h * k1[i]
    _deriv(tmp, delta, fx, v, tp, k2)
    for i in range(6):
        tmp[i] = s[i] + 0.5 * h * k2[i]
    _deriv(tmp, delta, fx, v, tp, k3)
    for i in range(6):
        tmp[i] = s[i] + h * k3[i]
    _deriv(tmp, delta, fx, v, tp, k4)
    for i in range(6):
        s[i] = s[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])


def step_once(state, double delta, double fx, double dt, tuple veh, tuple tire):
    """One classic fourth-order Runge-Kutta step with inputs held constant."""
    cdef Veh v = _unpack_veh(veh)
    cdef Tire tp = _unpack_tire(tire)
    cdef double s[6]
    cdef int i
    for i in range(6):
        s[i] = state[i]
    _rk4_const(s, delta, fx, dt, &v, &tp)
    return (s[0], s[1], s[2], s[3], s[4], s[5])


def simulate(state0, tuple veh, tuple tire, tuple ctrl, double dt, long n_steps, long stride=1):
    """Fixed-step RK4 run with steered/speed-regulated inputs.

    Same contract as the pure-Python twin: returns (times, states, n_done, ok).
    """
    cdef Veh v = _unpack_veh(veh)
    cdef Tire tp = _unpack_tire(tire)
    cdef Ctrl c
    c.delta_mode = int(ctrl[0])
    c.delta0 = ctrl[1]; c.amp = ctrl[2]; c.freq = ctrl[3]
    c.vt0 = ctrl[4]; c.vt_rate = ctrl[5]; c.kp = ctrl[6]; c.fx_max = ctrl[7]
    c.ff0 = ctrl[8]; c.ff2 = ctrl[9]

    cdef long n_rec = n_steps // stride + 1
    times_arr = np.empty(n_rec)
    states_arr = np.empty((n_rec, 6))
    cdef double[::1] times = times_arr
    cdef double[:, ::1] states = states_arr

    cdef double s[6]
    cdef double s_sub[6]
    cdef double k1[6]
    cdef double k2[6]
    cdef double k3[6]
    cdef double k4[6]
    cdef double h = dt
    cdef double t, d, f
    cdef long k, rec = 1
    cdef int i, finite
    for i in range(6):
        s[i] = state0[i]
    times[0] = 0.0
    for i in range(6):
        states[0, i] = s[i]

    for k in range(n_steps):
        t = k * h
        _controls(t, s[3], &c, &d, &f)
        _deriv(s, d, f, &v, &tp, k1)
        for i in range(6):
            s_sub[i] = s[i] + 0.5 * h * k1[i]
        _controls(t + 0.5 * h, s_sub[3], &c, &d, &f)
        _deriv(s_sub, d, f, &v, &tp, k2)
        for i in range(6):
            s_sub[i] = s[i] + 0.5 * h * k2[i]
        _controls(t + 0.5 * h, s_sub[3], &c, &d, &f)
        _deriv(s_sub, d, f, &v, &tp, k3)
        for i in range(6):
            s_sub[i] = s[i] + h * k3[i]
        _controls(t + h, s_sub[3], &c, &d, &f)
        _deriv(s_sub, d, f, &v, &tp, k4)
        for i in range(6):
            s[i] = s[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
        finite = 1
        for i in range(6):
            if not isfinite(s[i]):
                finite = 0
                break
        if not finite:
            return times_arr[:rec], states_arr[:rec], k, False
        if (k + 1) % stride == 0:
            times[rec] = (k + 1) * h
            for i in range(6):
                states[rec, i] = s[i]
            rec += 1
    return times_arr[:rec], states_arr[:rec], n_steps, True
