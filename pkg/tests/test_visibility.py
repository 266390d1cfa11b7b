import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cartwin.sensors import default_rig, is_point_visible, rig_from_dict, visible_mask


def single_sensor_rig(yaw_deg=0.0, h_fov_deg=90.0, v_fov_deg=40.0,
                      min_range=0.5, max_range=50.0, x=0.0, y=0.0, z=2.5):
    return rig_from_dict({
        "footprint": {"polygon": [[-1.0, -0.9], [4.0, -0.9], [4.0, 0.9], [-1.0, 0.9]],
                      "height": 1.9},
        "sensors": [{"id": "s", "modality": "camera", "max_range": max_range,
                     "min_range": min_range, "h_fov_deg": h_fov_deg,
                     "v_fov_deg": v_fov_deg, "rate_hz": 10,
                     "pose": {"x": x, "y": y, "z": z, "yaw_deg": yaw_deg}}],
    })


def test_range_band():
    rig = single_sensor_rig(x=4.5)
    assert is_point_visible(rig, "s", (14.5, 0.0, 2.5))
    assert not is_point_visible(rig, "s", (4.5 + 50.0 * 1.01, 0.0, 2.5))
    assert not is_point_visible(rig, "s", (4.9, 0.0, 2.5))  # inside min range


def test_azimuth_boundary_half_fov():
    rig = default_rig()
    spec, _ = rig.get("cam_front_center")
    R, t = rig.frame("cam_front_center")
    for deg, expected in ((40.0, True), (42.0, True), (45.0, False)):
        a = math.radians(deg)
        p = t + R @ np.array([20.0 * math.cos(a), 20.0 * math.sin(a), 0.0])
        assert is_point_visible(rig, "cam_front_center", p) is expected


def test_rotating_lidar_full_circle():
    rig = default_rig()
    spec, pose = rig.get("lidar_rot_left")
    for bearing in np.linspace(0.0, 2.0 * math.pi, 17):
        p = (pose.x + 20.0 * math.cos(bearing), pose.y + 20.0 * math.sin(bearing),
             pose.z)
        assert is_point_visible(rig, "lidar_rot_left", p)


def test_elevation_limit():
    rig = single_sensor_rig(v_fov_deg=40.0, x=4.5)
    # 25 degrees up at 10 m exceeds the +/-20 degree half fov
    up = 10.0 * math.tan(math.radians(25.0))
    assert not is_point_visible(rig, "s", (14.5, 0.0, 2.5 + up))
    ok = 10.0 * math.tan(math.radians(15.0))
    assert is_point_visible(rig, "s", (14.5, 0.0, 2.5 + ok))


def test_body_occlusion_blocks_cross_body_ray():
    # bumper-height sensor looking back across the body
    rig = rig_from_dict({
        "footprint": {"polygon": [[-1.0, -0.9], [4.0, -0.9], [4.0, 0.9], [-1.0, 0.9]],
                      "height": 1.9},
        "sensors": [{"id": "r", "modality": "radar", "max_range": 100.0,
                     "min_range": 0.2, "h_fov_deg": 359.0, "v_fov_deg": 20.0,
                     "rate_hz": 10, "pose": {"x": 4.01, "y": 0.0, "z": 0.5,
                                             "yaw_deg": 180.0}}],
    })
    assert not is_point_visible(rig, "r", (-10.0, 0.0, 0.5))  # through the body
    assert is_point_visible(rig, "r", (4.01, 20.0, 0.5))  # sideways, clear


def test_roof_sensor_sees_over_the_body():
    rig = single_sensor_rig(z=2.5, x=1.0, yaw_deg=180.0, v_fov_deg=60.0)
    # far behind at roof height: ray stays above the 1.9 m body
    assert is_point_visible(rig, "s", (-30.0, 0.0, 2.5))
    # ground point just behind the bumper: ray dips below the body top
    assert not is_point_visible(rig, "s", (-1.6, 0.0, 0.2))


def test_boresight_midpoint_visible_for_every_default_sensor():
    rig = default_rig()
    for spec, _ in rig.sensors:
        R, t = rig.frame(spec.id)
        mid = (spec.min_range + spec.max_range) / 2.0
        p = t + R @ np.array([mid, 0.0, 0.0])
        assert is_point_visible(rig, spec.id, p), spec.id


def test_unknown_sensor_raises():
    rig = default_rig()
    with pytest.raises(KeyError):
        is_point_visible(rig, "ghost", (1.0, 0.0, 0.0))


@settings(max_examples=25, deadline=None)
@given(yaw=st.floats(-math.pi, math.pi), dx=st.floats(-5.0, 5.0),
       dy=st.floats(-5.0, 5.0))
def test_visibility_invariant_under_rigid_transform(yaw, dx, dy):
    """Moving rig and query point together never changes visibility."""
    base = single_sensor_rig(x=4.2, y=0.3, yaw_deg=20.0)
    c, s = math.cos(yaw), math.sin(yaw)

    def rot2(x, y):
        return (c * x - s * y, s * x + c * y)

    px, py, pz = 12.0, 3.0, 1.0
    qx, qy = rot2(px, py)
    moved = rig_from_dict({
        "footprint": {"polygon": [[rot2(vx, vy)[0] + dx, rot2(vx, vy)[1] + dy]
                                  for vx, vy in
                                  [(-1.0, -0.9), (4.0, -0.9), (4.0, 0.9), (-1.0, 0.9)]],
                      "height": 1.9},
        "sensors": [{"id": "s", "modality": "camera", "max_range": 50.0,
                     "min_range": 0.5, "h_fov_deg": 90.0, "v_fov_deg": 40.0,
                     "rate_hz": 10,
                     "pose": {"x": rot2(4.2, 0.3)[0] + dx, "y": rot2(4.2, 0.3)[1] + dy,
                              "z": 2.5, "yaw_deg": 20.0 + math.degrees(yaw)}}],
    })
    assert is_point_visible(base, "s", (px, py, pz)) == \
        is_point_visible(moved, "s", (qx + dx, qy + dy, pz))


def test_vectorized_mask_matches_scalar_predicate():
    rig = default_rig()
    rng = np.random.default_rng(11)
    pts = np.column_stack([rng.uniform(-40, 40, 2000), rng.uniform(-40, 40, 2000),
                           rng.uniform(0.0, 3.0, 2000)])
    for spec, _ in rig.sensors:
        vm = visible_mask(rig, spec.id, pts)
        sm = np.array([is_point_visible(rig, spec.id, p) for p in pts])
        assert np.array_equal(vm, sm), spec.id
