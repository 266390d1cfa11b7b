"""Single-track vehicle model: state, axle loads, slip angles, derivatives.

The nonlinear dynamic bicycle equations live in the selected kernel backend
(compiled or pure Python); this module owns the typed public surface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .backend import kernel
from .params import AxleTires, VehicleParams

MAX_STEP_DT = 0.01


class DivergenceError(RuntimeError):
    """State went non-finite during integration."""

    def __init__(self, time_s: float):
        super().__init__(f"vehicle state diverged at t = {time_s:.6f} s")
        self.time_s = time_s


@dataclass(frozen=True)
class VehicleState:
    """Planar body state.

    Args:
        x, y: World position [m].
        psi: Heading [rad].
        v_x: Longitudinal body velocity [m/s], >= 0 in the supported regime.
        v_y: Lateral body velocity [m/s].
        psi_dot: Yaw rate [rad/s].
    """

    x: float = 0.0
    y: float = 0.0
    psi: float = 0.0
    v_x: float = 0.0
    v_y: float = 0.0
    psi_dot: float = 0.0

    def __post_init__(self):
        for name in ("x", "y", "psi", "v_x", "v_y", "psi_dot"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"VehicleState.{name} must be finite")

    def as_tuple(self) -> tuple[float, float, float, float, float, float]:
        return (self.x, self.y, self.psi, self.v_x, self.v_y, self.psi_dot)

    @classmethod
    def from_tuple(cls, t) -> "VehicleState":
        return cls(x=t[0], y=t[1], psi=t[2], v_x=t[3], v_y=t[4], psi_dot=t[5])


@dataclass(frozen=True)
class DriveInput:
    """Road-wheel steering angle [rad] and net longitudinal wheel force [N]."""

    delta: float = 0.0
    F_x_drive: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.delta) and math.isfinite(self.F_x_drive)):
            raise ValueError("DriveInput fields must be finite")


@dataclass(frozen=True)
class AxleLoads:
    """Static vertical tire loads per axle [N]."""

    F_z_f: float
    F_z_r: float

    @property
    def total(self) -> float:
        return self.F_z_f + self.F_z_r


def static_axle_loads(params: VehicleParams) -> AxleLoads:
    """Static moment balance about the axles.

    F_z_f = m g l_r / (l_f + l_r) and F_z_r = m g l_f / (l_f + l_r); the sum
    is m g by construction.
    """
    L = params.l_f + params.l_r
    mg = params.m * params.g
    return AxleLoads(F_z_f=mg * params.l_r / L, F_z_r=mg * params.l_f / L)


class LowSpeedError(ValueError):
    """Slip angles are undefined below the low-speed guard."""


def slip_angles(state: VehicleState, delta: float, params: VehicleParams) -> tuple[float, float]:
    """Front and rear axle slip angles [rad].

    Raises:
        LowSpeedError: If ``v_x`` is below the guard speed; callers fall back
            to the kinematic model there.
    """
    if state.v_x < params.v_x_guard:
        raise LowSpeedError(
            f"v_x = {state.v_x} m/s is below the low-speed guard "
            f"({params.v_x_guard} m/s); use the kinematic fallback"
        )
    alpha_f = delta - math.atan((state.v_y + params.l_f * state.psi_dot) / state.v_x)
    alpha_r = -math.atan((state.v_y - params.l_r * state.psi_dot) / state.v_x)
    return alpha_f, alpha_r


def resistance_forces(state: VehicleState, params: VehicleParams) -> tuple[float, float]:
    """Aerodynamic drag and rolling resistance [N].

    Both are magnitudes opposing forward motion; rolling resistance is zero
    at standstill.
    """
    F_drag = 0.5 * params.rho * params.c_d * params.A * state.v_x * abs(state.v_x)
    sign = 1.0 if state.v_x > 0.0 else (-1.0 if state.v_x < 0.0 else 0.0)
    F_roll = params.f_r * params.m * params.g * sign
    return F_drag, F_roll


def veh_tuple(params: VehicleParams) -> tuple:
    """Pack vehicle parameters for the kernel backends."""
    return (params.l_f, params.l_r, params.m, params.I_z, params.rho,
            params.A, params.c_d, params.f_r, params.g,
            params.drive_split_front, params.v_x_guard, params.kin_relax_tau)


def tire_tuple(params: VehicleParams, tires: AxleTires) -> tuple:
    """Pack tire coefficients with peak forces resolved against static loads."""
    loads = static_axle_loads(params)
    f, r = tires.front, tires.rear
    return (f.B, f.C, f.D_scale * loads.F_z_f, f.E,
            r.B, r.C, r.D_scale * loads.F_z_r, r.E)


@dataclass(frozen=True)
class StateDerivative:
    """d/dt of each VehicleState field."""

    x: float
    y: float
    psi: float
    v_x: float
    v_y: float
    psi_dot: float

    def as_tuple(self):
        return (self.x, self.y, self.psi, self.v_x, self.v_y, self.psi_dot)


def state_derivative(state: VehicleState, inp: DriveInput,
                     params: VehicleParams, tires: AxleTires) -> StateDerivative:
    """Body-frame planar equations of motion plus world-frame kinematics."""
    d = kernel.derivative(state.as_tuple(), inp.delta, inp.F_x_drive,
                          veh_tuple(params), tire_tuple(params, tires))
    if not all(math.isfinite(v) for v in d):
        raise DivergenceError(0.0)
    return StateDerivative(*d)


def step(state: VehicleState, inp: DriveInput, dt: float,
         params: VehicleParams, tires: AxleTires, *, t: float = 0.0) -> VehicleState:
    """Advance one RK4 step with inputs held constant over the step.

    Args:
        dt: Step size [s], capped at MAX_STEP_DT.
        t: Simulation time of the step start, only used to report divergence.
    """
    if not 0.0 < dt <= MAX_STEP_DT:
        raise ValueError(f"dt must be in (0, {MAX_STEP_DT}] s, got {dt!r}")
    out = kernel.step_once(state.as_tuple(), inp.delta, inp.F_x_drive, dt,
                           veh_tuple(params), tire_tuple(params, tires))
    if not all(math.isfinite(v) for v in out):
        raise DivergenceError(t)
    return VehicleState.from_tuple(out)
