import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cartwin.dynamics import (
    combined_slip_scale,
    pacejka_lateral_force,
    pacejka_slope_at_origin,
    static_axle_loads,
)

# Frozen from a 50-digit evaluation of the magic formula (mpmath).
FRONT_FY_AT_01 = 10280.097343314089
FRONT_RATIO_AT_01 = 0.90068139555473942
REAR_RATIO_AT_005 = 0.97845713076729989


def test_zero_slip_gives_zero_force(params, tires):
    loads = static_axle_loads(params)
    assert pacejka_lateral_force(0.0, tires.front, loads.F_z_f) == 0.0
    assert pacejka_lateral_force(0.0, tires.rear, loads.F_z_r) == 0.0


def test_front_tire_frozen_value(params, tires):
    loads = static_axle_loads(params)
    fy = pacejka_lateral_force(0.1, tires.front, loads.F_z_f)
    assert math.isclose(fy, FRONT_FY_AT_01, rel_tol=1e-12)
    D = tires.front.D_scale * loads.F_z_f
    assert math.isclose(fy / D, FRONT_RATIO_AT_01, rel_tol=1e-12)


def test_rear_tire_frozen_ratio(params, tires):
    loads = static_axle_loads(params)
    fy = pacejka_lateral_force(0.05, tires.rear, loads.F_z_r)
    D = tires.rear.D_scale * loads.F_z_r
    assert math.isclose(fy / D, REAR_RATIO_AT_005, rel_tol=1e-12)


@given(alpha=st.floats(-1.0, 1.0, allow_nan=False))
def test_odd_symmetry(alpha):
    from cartwin.dynamics import AxleTires, VehicleParams

    loads = static_axle_loads(VehicleParams())
    tires = AxleTires()
    for tire, fz in ((tires.front, loads.F_z_f), (tires.rear, loads.F_z_r)):
        assert pacejka_lateral_force(-alpha, tire, fz) == \
            -pacejka_lateral_force(alpha, tire, fz)


def test_bound_by_peak_value(params, tires):
    loads = static_axle_loads(params)
    alphas = np.linspace(-1.0, 1.0, 20001)
    for tire, fz in ((tires.front, loads.F_z_f), (tires.rear, loads.F_z_r)):
        D = tire.D_scale * fz
        fy = np.array([pacejka_lateral_force(a, tire, fz) for a in alphas])
        assert np.all(np.abs(fy) <= D * (1.0 + 1e-6))


def test_slope_at_origin_is_bcd(params, tires):
    loads = static_axle_loads(params)
    for tire, fz in ((tires.front, loads.F_z_f), (tires.rear, loads.F_z_r)):
        bcd = pacejka_slope_at_origin(tire, fz)
        h = 1e-7
        fd = (pacejka_lateral_force(h, tire, fz)
              - pacejka_lateral_force(-h, tire, fz)) / (2.0 * h)
        assert math.isclose(fd, bcd, rel_tol=1e-4)


def test_rejects_nonpositive_load(tires):
    with pytest.raises(ValueError):
        pacejka_lateral_force(0.1, tires.front, 0.0)
    with pytest.raises(ValueError):
        pacejka_lateral_force(math.nan, tires.front, 1000.0)


def test_combined_slip_examples():
    assert combined_slip_scale(0.0, 1000.0) == 1.0
    assert combined_slip_scale(1000.0, 1000.0) == 0.0
    assert math.isclose(combined_slip_scale(600.0, 1000.0), 0.8, rel_tol=1e-15)
    # saturation beyond the friction limit is not an error
    assert combined_slip_scale(1500.0, 1000.0) == 0.0
    assert combined_slip_scale(-1500.0, 1000.0) == 0.0


@given(fx=st.floats(-5e4, 5e4), mu_fz=st.floats(1.0, 5e4))
def test_combined_slip_range(fx, mu_fz):
    s = combined_slip_scale(fx, mu_fz)
    assert 0.0 <= s <= 1.0


def test_combined_slip_rejects_bad_limit():
    with pytest.raises(ValueError):
        combined_slip_scale(0.0, 0.0)
