"""Lateral tire force model and combined-slip scaling."""

from __future__ import annotations

import math

from .params import TireParams


def pacejka_lateral_force(alpha: float, tire: TireParams, F_z: float) -> float:
    """Lateral axle force from the magic formula.

    F_y = D * sin(C * atan(B*alpha - E*(B*alpha - atan(B*alpha)))) with the
    peak value D = D_scale * F_z.

    Args:
        alpha: Slip angle [rad].
        tire: Axle coefficient set.
        F_z: Vertical axle load [N], must be positive.

    Returns:
        Lateral force [N], odd in ``alpha``.
    """
    if not (F_z > 0.0):
        raise ValueError(f"vertical load must be positive, got {F_z!r}")
    if not math.isfinite(alpha):
        raise ValueError(f"slip angle must be finite, got {alpha!r}")
    x = tire.B * alpha
    D = tire.D_scale * F_z
    return D * math.sin(tire.C * math.atan(x - tire.E * (x - math.atan(x))))


def pacejka_slope_at_origin(tire: TireParams, F_z: float) -> float:
    """Cornering stiffness dF_y/dalpha at zero slip, equal to B*C*D [N/rad]."""
    return tire.B * tire.C * tire.D_scale * F_z


def combined_slip_scale(F_x: float, mu_F_z: float) -> float:
    """Friction-ellipse derating of lateral force under longitudinal force.

    Args:
        F_x: Longitudinal tire force on the axle [N].
        mu_F_z: Friction-limited load of the axle [N] (the magic-formula
            peak value D).

    Returns:
        Scale factor in [0, 1]; 0 once ``|F_x| >= mu_F_z`` (saturated).
    """
    if not (mu_F_z > 0.0):
        raise ValueError(f"friction-limited load must be positive, got {mu_F_z!r}")
    ratio = F_x / mu_F_z
    return math.sqrt(max(0.0, 1.0 - ratio * ratio))
