"""Exploration-space poses and the weighted distance metric.

A pose is a rigid transform of the robot root: translation plus orientation.
Orientation is stored canonically as roll/pitch/yaw (intrinsic z-y-x, radians)
because that is what scenario files carry; the equivalent unit quaternion is
derived lazily for metric and interpolation work.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

TWO_PI = 2.0 * math.pi


def wrap_angle(a: float) -> float:
    """Wrap to (-pi, pi]."""
    a = math.fmod(a, TWO_PI)
    if a > math.pi:
        a -= TWO_PI
    elif a <= -math.pi:
        a += TWO_PI
    return a


def rpy_to_quat(roll: float, pitch: float, yaw: float) -> tuple[float, float, float, float]:
    """Unit quaternion (w, x, y, z) for intrinsic z-y-x Euler angles."""
    cr, sr = math.cos(roll * 0.5), math.sin(roll * 0.5)
    cp, sp = math.cos(pitch * 0.5), math.sin(pitch * 0.5)
    cy, sy = math.cos(yaw * 0.5), math.sin(yaw * 0.5)
    return (
        cr * cp * cy + sr * sp * sy,
        sr * cp * cy - cr * sp * sy,
        cr * sp * cy + sr * cp * sy,
        cr * cp * sy - sr * sp * cy,
    )


def quat_to_rpy(q: tuple[float, float, float, float]) -> tuple[float, float, float]:
    w, x, y, z = q
    roll = math.atan2(2.0 * (w * x + y * z), 1.0 - 2.0 * (x * x + y * y))
    s = 2.0 * (w * y - z * x)
    s = max(-1.0, min(1.0, s))
    pitch = math.asin(s)
    yaw = math.atan2(2.0 * (w * z + x * y), 1.0 - 2.0 * (y * y + z * z))
    return roll, pitch, yaw


def quat_mul(a, b):
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return (
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    )


def quat_conj(q):
    return (q[0], -q[1], -q[2], -q[3])


def quat_norm(q) -> float:
    return math.sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3])


def geodesic_angle(qa, qb) -> float:
    """Rotation angle in [0, pi] between two unit quaternions.

    Computed from the relative quaternion's vector part, which stays accurate
    for very small angles where the acos form loses precision.
    """
    r = quat_mul(quat_conj(qa), qb)
    vec = math.sqrt(r[1] * r[1] + r[2] * r[2] + r[3] * r[3])
    return 2.0 * math.atan2(vec, abs(r[0]))


def quat_slerp(qa, qb, s: float):
    dot = qa[0] * qb[0] + qa[1] * qb[1] + qa[2] * qb[2] + qa[3] * qb[3]
    if dot < 0.0:
        qb = (-qb[0], -qb[1], -qb[2], -qb[3])
        dot = -dot
    if dot > 1.0 - 1e-12:
        # nearly parallel: linear blend then renormalize
        q = tuple(qa[i] + s * (qb[i] - qa[i]) for i in range(4))
        n = quat_norm(q)
        return tuple(c / n for c in q)
    theta = math.acos(min(1.0, dot))
    st = math.sin(theta)
    wa = math.sin((1.0 - s) * theta) / st
    wb = math.sin(s * theta) / st
    return tuple(wa * qa[i] + wb * qb[i] for i in range(4))


@dataclass(frozen=True)
class Pose:
    """Robot root pose: translation (m) + orientation (rpy, radians)."""

    x: float
    y: float
    z: float
    roll: float = 0.0
    pitch: float = 0.0
    yaw: float = 0.0

    def __post_init__(self):
        for name in ("x", "y", "z", "roll", "pitch", "yaw"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"pose field {name!r} is not finite: {v!r}")

    @cached_property
    def quaternion(self) -> tuple[float, float, float, float]:
        return rpy_to_quat(self.roll, self.pitch, self.yaw)

    @property
    def translation(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)

    @classmethod
    def from_quaternion(cls, translation, quat) -> "Pose":
        n = quat_norm(quat)
        if abs(n - 1.0) > 1e-9:
            raise ValueError(f"orientation quaternion norm {n!r} deviates from 1 by more than 1e-9")
        r, p, y = quat_to_rpy(tuple(c / n for c in quat))
        return cls(translation[0], translation[1], translation[2], r, p, y)

    @classmethod
    def from_xyz_rpy(cls, xyz, rpy) -> "Pose":
        return cls(float(xyz[0]), float(xyz[1]), float(xyz[2]),
                   float(rpy[0]), float(rpy[1]), float(rpy[2]))

    def as_xyz_rpy(self) -> tuple[list[float], list[float]]:
        return [self.x, self.y, self.z], [self.roll, self.pitch, self.yaw]

    def xy_distance(self, other: "Pose") -> float:
        return math.hypot(other.x - self.x, other.y - self.y)


def pose_distance(a: Pose, b: Pose, rotation_weight: float = 0.5) -> float:
    """Exploration metric: Euclidean translation + weighted geodesic rotation.

    Parameters
    ----------
    rotation_weight : float
        Meters charged per radian of orientation change.
    """
    dt = math.sqrt((a.x - b.x) ** 2 + (a.y - b.y) ** 2 + (a.z - b.z) ** 2)
    return dt + rotation_weight * geodesic_angle(a.quaternion, b.quaternion)


def interpolate_pose(a: Pose, b: Pose, s: float) -> Pose:
    """Point at fraction s along the geodesic from a to b (s in [0, 1])."""
    if s <= 0.0:
        return a
    if s >= 1.0:
        return b
    t = (a.x + s * (b.x - a.x), a.y + s * (b.y - a.y), a.z + s * (b.z - a.z))
    q = quat_slerp(a.quaternion, b.quaternion, s)
    r, p, y = quat_to_rpy(q)
    return Pose(t[0], t[1], t[2], r, p, y)


def step_towards(a: Pose, b: Pose, step: float, rotation_weight: float = 0.5) -> Pose:
    """Move at most `step` (in the exploration metric) from a towards b.

    Returns b itself once it is within one step, so callers can detect
    arrival by identity of the metric distance.
    """
    d = pose_distance(a, b, rotation_weight)
    if d <= step:
        return b
    return interpolate_pose(a, b, step / d)
