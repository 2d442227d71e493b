import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial.transform import Rotation

from posgraph.geometry import (Pose, geodesic_angle, interpolate_pose,
                               pose_distance, quat_mul, quat_slerp, rpy_to_quat,
                               step_towards, wrap_angle)

angles = st.floats(-10.0, 10.0, allow_nan=False)
coords = st.floats(-100.0, 100.0, allow_nan=False)


def scipy_quat(roll, pitch, yaw):
    # scipy returns (x, y, z, w); the package uses (w, x, y, z)
    x, y, z, w = Rotation.from_euler("xyz", [roll, pitch, yaw]).as_quat()
    return (w, x, y, z)


def quat_close(a, b, tol=1e-12):
    # q and -q are the same rotation
    direct = max(abs(ai - bi) for ai, bi in zip(a, b))
    flipped = max(abs(ai + bi) for ai, bi in zip(a, b))
    return min(direct, flipped) <= tol


def test_wrap_angle_range_and_fixpoints():
    assert wrap_angle(0.0) == 0.0
    assert wrap_angle(math.pi) == pytest.approx(math.pi)  # wraps to (-pi, pi]
    assert wrap_angle(-math.pi) == pytest.approx(math.pi)
    assert wrap_angle(2 * math.pi) == pytest.approx(0.0)
    assert wrap_angle(3 * math.pi) == pytest.approx(math.pi)


@given(angles)
def test_wrap_angle_is_idempotent_and_in_range(a):
    w = wrap_angle(a)
    assert -math.pi < w <= math.pi
    assert wrap_angle(w) == pytest.approx(w, abs=1e-12)


@given(angles, angles, angles)
@settings(max_examples=200)
def test_rpy_quaternion_matches_scipy(roll, pitch, yaw):
    assert quat_close(rpy_to_quat(roll, pitch, yaw), scipy_quat(roll, pitch, yaw),
                      tol=1e-9)


@given(angles, angles, angles, angles, angles, angles)
@settings(max_examples=200)
def test_geodesic_angle_matches_scipy(r1, p1, y1, r2, p2, y2):
    qa = rpy_to_quat(r1, p1, y1)
    qb = rpy_to_quat(r2, p2, y2)
    ra = Rotation.from_euler("xyz", [r1, p1, y1])
    rb = Rotation.from_euler("xyz", [r2, p2, y2])
    expected = (ra.inv() * rb).magnitude()
    assert geodesic_angle(qa, qb) == pytest.approx(expected, abs=1e-9)


def test_quat_mul_composes_rotations():
    qa = rpy_to_quat(0.3, 0.0, 0.0)
    qb = rpy_to_quat(0.0, 0.0, 0.7)
    composed = quat_mul(qb, qa)  # apply qa then qb
    expected = Rotation.from_euler("xyz", [0.0, 0.0, 0.7]) * Rotation.from_euler(
        "xyz", [0.3, 0.0, 0.0])
    x, y, z, w = expected.as_quat()
    assert quat_close(composed, (w, x, y, z), tol=1e-12)


def test_pose_quaternion_round_trip():
    p = Pose(1.0, 2.0, 3.0, 0.4, -0.2, 1.1)
    q = Pose.from_quaternion((p.x, p.y, p.z), p.quaternion)
    assert geodesic_angle(p.quaternion, q.quaternion) == pytest.approx(0.0, abs=1e-9)


def test_from_quaternion_rejects_unnormalized():
    with pytest.raises(ValueError):
        Pose.from_quaternion((0.0, 0.0, 0.0), (1.1, 0.0, 0.0, 0.0))


def test_pose_rejects_non_finite():
    with pytest.raises(ValueError):
        Pose(math.nan, 0.0, 0.0)


@given(coords, coords, angles, coords, coords, angles)
@settings(max_examples=200)
def test_pose_distance_symmetry(x1, y1, t1, x2, y2, t2):
    a = Pose(x1, y1, 0.0, yaw=t1)
    b = Pose(x2, y2, 0.0, yaw=t2)
    assert pose_distance(a, b) == pytest.approx(pose_distance(b, a), rel=1e-12)


def test_pose_distance_components():
    a = Pose(0.0, 0.0, 0.0)
    b = Pose(3.0, 4.0, 0.0)
    assert pose_distance(a, b) == pytest.approx(5.0)
    # half-turn heading change with weight 0.5 adds pi/2
    c = Pose(0.0, 0.0, 0.0, yaw=-math.pi)
    assert pose_distance(a, c) == pytest.approx(0.5 * math.pi)
    assert pose_distance(a, c, rotation_weight=0.25) == pytest.approx(0.25 * math.pi)


def test_pose_distance_zero_iff_identical():
    a = Pose(1.0, 2.0, 0.5, 0.1, 0.2, 0.3)
    assert pose_distance(a, a) == pytest.approx(0.0, abs=1e-12)
    assert pose_distance(a, Pose(1.0, 2.0, 0.5, 0.1, 0.2, 0.30001)) > 1e-7


def test_interpolate_pose_endpoints_exact():
    a = Pose(0.0, 1.0, 2.0, 0.1, -0.3, 0.5)
    b = Pose(4.0, -1.0, 0.0, -0.2, 0.1, -2.8)
    assert interpolate_pose(a, b, 0.0) == a
    assert interpolate_pose(a, b, 1.0) == b


def test_interpolate_pose_midpoint_translation():
    a = Pose(0.0, 0.0, 0.0)
    b = Pose(2.0, 4.0, 6.0)
    m = interpolate_pose(a, b, 0.5)
    assert (m.x, m.y, m.z) == pytest.approx((1.0, 2.0, 3.0))


def test_interpolate_pose_yaw_shortest_way():
    a = Pose(0.0, 0.0, 0.0, yaw=3.0)
    b = Pose(0.0, 0.0, 0.0, yaw=-3.0)
    m = interpolate_pose(a, b, 0.5)
    # shortest path crosses the pi seam, not zero
    assert abs(wrap_angle(m.yaw)) == pytest.approx(math.pi, abs=1e-9)


def test_quat_slerp_antipodal_sign_handling():
    qa = rpy_to_quat(0.0, 0.0, 0.1)
    qb = tuple(-c for c in rpy_to_quat(0.0, 0.0, 0.2))
    mid = quat_slerp(qa, qb, 0.5)
    assert geodesic_angle(rpy_to_quat(0.0, 0.0, 0.15), mid) == pytest.approx(0.0, abs=1e-9)


def test_step_towards_returns_target_within_step():
    a = Pose(0.0, 0.0, 0.0)
    b = Pose(0.2, 0.0, 0.0)
    assert step_towards(a, b, 0.3) is b


def test_step_towards_step_length():
    a = Pose(0.0, 0.0, 0.0)
    b = Pose(10.0, 0.0, 0.0)
    p = step_towards(a, b, 0.3)
    assert pose_distance(a, p) == pytest.approx(0.3, rel=1e-9)
    assert p.y == 0.0 and p.yaw == 0.0


@given(coords, coords, angles, coords, coords, angles)
@settings(max_examples=100)
def test_step_towards_reaches_target(x1, y1, t1, x2, y2, t2):
    a = Pose(x1, y1, 0.0, yaw=t1)
    b = Pose(x2, y2, 0.0, yaw=t2)
    steps = 0
    cur = a
    bound = int(pose_distance(a, b) / 0.3) + 2
    while cur is not b and steps < bound:
        cur = step_towards(cur, b, 0.3)
        steps += 1
    assert cur is b


def test_step_towards_progress_is_linear_in_metric():
    rng = random.Random(3)
    for _ in range(50):
        a = Pose(rng.uniform(-5, 5), rng.uniform(-5, 5), 0.0, yaw=rng.uniform(-3, 3))
        b = Pose(rng.uniform(-5, 5), rng.uniform(-5, 5), 0.0, yaw=rng.uniform(-3, 3))
        d = pose_distance(a, b)
        if d < 0.4:
            continue
        p = step_towards(a, b, 0.3)
        assert pose_distance(a, p) + pose_distance(p, b) == pytest.approx(d, rel=1e-6)
