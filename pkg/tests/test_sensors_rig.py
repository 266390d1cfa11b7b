import math

import pytest

from cartwin.config import ConfigError
from cartwin.sensors import SensorPose, SensorSpec, default_rig, rig_from_dict
from cartwin.sensors.rig import Footprint, Rig, default_rig_dict


def test_default_rig_counts():
    rig = default_rig()
    # physical units: 10 cameras, 4 lidars, 6 radars
    assert len(rig.units("camera")) == 10
    assert len(rig.units("lidar")) == 4
    assert len(rig.units("radar")) == 6
    assert len(rig.units()) == 20
    # radar far/near overlay doubles the radar spec count
    assert len(rig.specs("radar")) == 12
    assert len(rig.sensors) == 26


def test_default_rig_fovs_match_datasheet_values():
    rig = default_rig()
    front, _ = rig.get("cam_front_center")
    assert math.isclose(front.h_fov, math.radians(84.9))
    assert math.isclose(front.v_fov, math.radians(59.7))
    rear, _ = rig.get("cam_rear_center")
    assert math.isclose(rear.h_fov, math.radians(99.5))
    long_range, _ = rig.get("cam_long_left")
    assert math.isclose(long_range.h_fov, math.radians(38.6))
    lidar, _ = rig.get("lidar_rot_left")
    assert math.isclose(lidar.h_fov, 2.0 * math.pi)
    assert lidar.max_range == 45.0
    falcon, _ = rig.get("lidar_ss_front")
    assert math.isclose(falcon.h_fov, math.radians(120.0))
    assert falcon.max_range == 250.0
    radar_far, _ = rig.get("radar_front_center_far")
    assert math.isclose(radar_far.h_fov, math.radians(18.0))  # +/- 9 deg
    assert radar_far.max_range == 250.0
    radar_near, _ = rig.get("radar_front_center_near")
    assert math.isclose(radar_near.h_fov, math.radians(120.0))  # +/- 60 deg


def test_round_trip_through_dict_loader():
    rig = rig_from_dict(default_rig_dict())
    assert rig.ids() == default_rig().ids()


def test_empty_sensor_list_is_valid():
    rig = rig_from_dict({"sensors": []})
    assert rig.sensors == ()
    assert rig.modalities() == []


def test_duplicate_ids_rejected():
    doc = {"sensors": [
        {"id": "s", "modality": "lidar", "h_fov_deg": 360, "v_fov_deg": 45,
         "max_range": 45, "min_range": 0.3},
        {"id": "s", "modality": "lidar", "h_fov_deg": 360, "v_fov_deg": 45,
         "max_range": 45, "min_range": 0.3},
    ]}
    with pytest.raises(ConfigError, match="duplicate sensor id"):
        rig_from_dict(doc)


def test_unknown_keys_rejected():
    doc = {"sensors": [{"id": "s", "modality": "lidar", "h_fov_deg": 360,
                        "v_fov_deg": 45, "max_range": 45, "range": 45}]}
    with pytest.raises(ConfigError, match="unknown key"):
        rig_from_dict(doc)


def test_both_angle_units_rejected():
    doc = {"sensors": [{"id": "s", "modality": "lidar", "h_fov_deg": 360,
                        "h_fov_rad": 6.28, "v_fov_deg": 45, "max_range": 45}]}
    with pytest.raises(ConfigError, match="both"):
        rig_from_dict(doc)


def test_non_simple_footprint_rejected():
    doc = {"footprint": {"polygon": [[0, 0], [1, 1], [1, 0], [0, 1]]},
           "sensors": []}
    with pytest.raises(ConfigError, match="simple"):
        rig_from_dict(doc)


@pytest.mark.parametrize("bad", [
    {"h_fov": 0.0}, {"h_fov": 7.0}, {"v_fov": 0.0}, {"max_range": 0.0},
    {"min_range": 50.0}, {"rate": 0.0}, {"modality": "sonar"},
])
def test_spec_invariants(bad):
    kw = dict(id="s", modality="camera", h_fov=1.0, v_fov=1.0,
              max_range=40.0, min_range=0.5, rate=10.0)
    kw.update(bad)
    with pytest.raises(ValueError):
        SensorSpec(**kw)


def test_unit_defaults_to_id():
    spec = SensorSpec(id="cam", modality="camera", h_fov=1.0, v_fov=1.0, max_range=10.0)
    assert spec.unit == "cam"


def test_unknown_sensor_lookup():
    rig = default_rig()
    with pytest.raises(KeyError, match="unknown sensor id"):
        rig.get("nope")


def test_footprint_area_positive_and_ccw_normalized():
    fp = Footprint(polygon=[[0, 0], [0, 2], [4, 2], [4, 0]])  # clockwise input
    assert fp.area() == 8.0
    from cartwin.sensors.geometry import polygon_area
    assert polygon_area(fp.polygon) > 0
