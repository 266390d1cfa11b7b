"""Nonlinear single-track vehicle dynamics with magic-formula tires."""

from .backend import BACKEND, available_backends
from .iso4138 import (
    InsufficientDataError,
    SteadyStatePoint,
    SteadyStateReport,
    run_iso4138_continuous,
    run_iso4138_discrete,
    understeer_gradient,
)
from .model import (
    AxleLoads,
    DivergenceError,
    DriveInput,
    LowSpeedError,
    StateDerivative,
    VehicleState,
    resistance_forces,
    slip_angles,
    state_derivative,
    static_axle_loads,
    step,
)
from .params import AxleTires, TireParams, VehicleParams, tires_from_dict, vehicle_params_from_dict
from .tire import combined_slip_scale, pacejka_lateral_force, pacejka_slope_at_origin

__all__ = [
    "AxleLoads", "AxleTires", "BACKEND", "DivergenceError", "DriveInput",
    "InsufficientDataError", "LowSpeedError", "StateDerivative",
    "SteadyStatePoint", "SteadyStateReport", "TireParams", "VehicleParams",
    "VehicleState", "available_backends", "combined_slip_scale",
    "pacejka_lateral_force", "pacejka_slope_at_origin", "resistance_forces",
    "run_iso4138_continuous", "run_iso4138_discrete", "slip_angles",
    "state_derivative", "static_axle_loads", "step", "tires_from_dict",
    "understeer_gradient", "vehicle_params_from_dict",
]
