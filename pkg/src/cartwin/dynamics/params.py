"""Vehicle and tire parameter sets for the single-track model.

Defaults reproduce the identified parameter tables of the research van the
twin mirrors. The tabulated wheelbase is stored for reference but every
computation uses ``l_f + l_r`` (the two disagree in the source data; the sum
keeps the moment balance self-consistent).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields


@dataclass(frozen=True)
class VehicleParams:
    """Chassis, aero, and model-configuration parameters (SI units).

    Args:
        l_f: Distance front axle to center of gravity [m].
        l_r: Distance rear axle to center of gravity [m].
        l_table: Tabulated wheelbase [m]; stored, never used in computations.
        m: Vehicle mass [kg].
        I_z: Yaw moment of inertia [kg m^2].
        rho: Air density [kg/m^3].
        A: Frontal cross-section area [m^2].
        c_d: Aerodynamic drag coefficient.
        f_r: Rolling-resistance coefficient.
        steering_ratio: Steering-wheel angle per road-wheel angle.
        g: Gravitational acceleration [m/s^2].
        drive_split_front: Fraction of drive/brake force on the front axle.
        v_x_guard: Below this speed the slip-angle model is singular and the
            kinematic fallback is used [m/s].
        kin_relax_tau: Relaxation time pulling lateral states onto the
            kinematic solution in the low-speed regime [s].
    """

    l_f: float = 1.724
    l_r: float = 1.247
    l_table: float = 3.128
    m: float = 2520.0
    I_z: float = 13600.0
    rho: float = 1.225
    A: float = 2.9
    c_d: float = 0.35
    f_r: float = 0.012
    steering_ratio: float = 14.3
    g: float = 9.81
    drive_split_front: float = 0.5
    v_x_guard: float = 0.5
    kin_relax_tau: float = 0.1

    def __post_init__(self):
        for name in ("l_f", "l_r", "l_table", "m", "I_z", "rho", "A",
                     "steering_ratio", "g", "v_x_guard", "kin_relax_tau"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"VehicleParams.{name} must be positive, got {value!r}")
        for name in ("c_d", "f_r"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0.0):
                raise ValueError(f"VehicleParams.{name} must be >= 0, got {value!r}")
        if not 0.0 <= self.drive_split_front <= 1.0:
            raise ValueError("drive_split_front must lie in [0, 1]")

    @property
    def wheelbase(self) -> float:
        """Effective wheelbase ``l_f + l_r`` [m]."""
        return self.l_f + self.l_r


@dataclass(frozen=True)
class TireParams:
    """Magic-formula coefficients for one axle.

    The peak force is ``D_scale`` times the static vertical axle load, so the
    same coefficient set doubles as the friction limit of the axle.
    """

    B: float
    C: float
    D_scale: float
    E: float

    def __post_init__(self):
        for name in ("B", "C", "D_scale"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"TireParams.{name} must be positive, got {value!r}")
        if not math.isfinite(self.E):
            raise ValueError("TireParams.E must be finite")


def default_front_tire() -> TireParams:
    return TireParams(B=10.0, C=1.0, D_scale=1.1, E=-5.0)


def default_rear_tire() -> TireParams:
    return TireParams(B=12.4, C=1.8, D_scale=2.1, E=-5.0)


@dataclass(frozen=True)
class AxleTires:
    """Front and rear tire parameter pair."""

    front: TireParams = field(default_factory=default_front_tire)
    rear: TireParams = field(default_factory=default_rear_tire)


def vehicle_params_from_dict(raw: dict) -> VehicleParams:
    """Build VehicleParams from a config mapping, rejecting unknown keys."""
    known = {f.name for f in fields(VehicleParams)}
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"unknown vehicle parameter keys: {sorted(unknown)}")
    return VehicleParams(**{k: float(v) for k, v in raw.items()})


def tires_from_dict(raw: dict) -> AxleTires:
    """Build front/rear tire parameters from a config mapping."""
    out = {}
    for axle in ("front", "rear"):
        if axle not in raw:
            raise ValueError(f"tire config missing '{axle}' section")
        section = raw[axle]
        known = {f.name for f in fields(TireParams)}
        unknown = set(section) - known
        if unknown:
            raise ValueError(f"unknown tire parameter keys for {axle}: {sorted(unknown)}")
        out[axle] = TireParams(**{k: float(v) for k, v in section.items()})
    return AxleTires(front=out["front"], rear=out["rear"])
