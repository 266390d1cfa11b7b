import math

import pytest

from cartwin.dynamics import (
    AxleTires,
    TireParams,
    VehicleParams,
    tires_from_dict,
    vehicle_params_from_dict,
)


def test_defaults_match_identified_values(params):
    assert params.l_f == 1.724
    assert params.l_r == 1.247
    assert params.l_table == 3.128
    assert params.m == 2520.0
    assert params.I_z == 13600.0
    assert params.rho == 1.225
    assert params.A == 2.9
    assert params.c_d == 0.35
    assert math.isclose(params.wheelbase, 2.971)


def test_tire_defaults(tires):
    assert (tires.front.B, tires.front.C, tires.front.D_scale, tires.front.E) == \
        (10.0, 1.0, 1.1, -5.0)
    assert (tires.rear.B, tires.rear.C, tires.rear.D_scale, tires.rear.E) == \
        (12.4, 1.8, 2.1, -5.0)


def test_tabulated_wheelbase_is_not_the_effective_one(params):
    # The tabulated value disagrees with l_f + l_r; computations use the sum.
    assert params.l_table != params.wheelbase


@pytest.mark.parametrize("field,value", [
    ("m", 0.0), ("m", -1.0), ("I_z", 0.0), ("l_f", -0.1), ("rho", 0.0),
    ("c_d", -0.01), ("f_r", -1e-9), ("steering_ratio", 0.0), ("g", 0.0),
])
def test_invalid_vehicle_params_rejected(field, value):
    with pytest.raises(ValueError):
        VehicleParams(**{field: value})


@pytest.mark.parametrize("field,value", [
    ("B", 0.0), ("C", -1.0), ("D_scale", 0.0), ("E", math.nan),
])
def test_invalid_tire_params_rejected(field, value):
    base = {"B": 10.0, "C": 1.0, "D_scale": 1.1, "E": -5.0}
    base[field] = value
    with pytest.raises(ValueError):
        TireParams(**base)


def test_from_dict_rejects_unknown_keys():
    with pytest.raises(ValueError, match="unknown vehicle parameter"):
        vehicle_params_from_dict({"m": 2520, "wheelbase": 3.0})
    with pytest.raises(ValueError, match="unknown tire parameter"):
        tires_from_dict({"front": {"B": 10, "C": 1, "D_scale": 1, "E": -5, "F": 0},
                         "rear": {"B": 1, "C": 1, "D_scale": 1, "E": 0}})
    with pytest.raises(ValueError, match="missing 'rear'"):
        tires_from_dict({"front": {"B": 10, "C": 1, "D_scale": 1, "E": -5}})


def test_from_dict_round_trip():
    tires = tires_from_dict({
        "front": {"B": 10, "C": 1, "D_scale": 1.1, "E": -5},
        "rear": {"B": 12.4, "C": 1.8, "D_scale": 2.1, "E": -5},
    })
    assert tires == AxleTires()
