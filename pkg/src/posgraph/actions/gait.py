"""Ground gaits (walk, crawl): condition manifolds and pose operators.

A gait's sufficient condition is a full feasibility certificate at desk
scale: swept volume clear of obstacles, every support point on a single slab,
root height and orientation exactly nominal. The necessary condition is the
cheap over-approximation: pelvis volume clear and some ground within reach.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..geometry import Pose, interpolate_pose, pose_distance, wrap_angle
from ..world import (Environment, OrientedBox, RobotShape, box_contains_box,
                     placed_box, shape_collides_env, slab_under)

NOMINAL_TOL = 1e-6


@dataclass(frozen=True)
class GaitSpec:
    name: str
    nominal_pitch: float
    hip_height: float
    sweep: OrientedBox
    support_points: tuple[tuple[float, float], ...]
    transition_partner: str


def specs_from_robot(robot: RobotShape) -> dict[str, GaitSpec]:
    for label, sweep in (("walk_sweep", robot.walk_sweep),
                         ("crawl_sweep", robot.crawl_sweep)):
        if not box_contains_box(sweep, robot.pelvis_box):
            raise ValueError(f"{label} must enclose the pelvis box, or the "
                             "sufficient condition would not imply the necessary one")
    walk = GaitSpec("walk", 0.0, robot.hip_height_walk, robot.walk_sweep,
                    robot.support_points_walk, "crawl")
    crawl = GaitSpec("crawl", robot.crawl_pitch, robot.hip_height_crawl,
                     robot.crawl_sweep, robot.support_points_crawl, "walk")
    return {"walk": walk, "crawl": crawl}


def support_points_world(spec: GaitSpec, pose: Pose) -> list[tuple[float, float]]:
    c, s = math.cos(pose.yaw), math.sin(pose.yaw)
    return [(pose.x + px * c - py * s, pose.y + px * s + py * c)
            for px, py in spec.support_points]


def gait_project(spec: GaitSpec, env: Environment, pose: Pose) -> Pose | None:
    """Snap a raw pose onto the gait manifold: keep x, y, yaw; set the root
    height from the slab underneath and the orientation to nominal. None over
    a gap. Idempotent."""
    slab = slab_under(env, pose.x, pose.y)
    if slab is None:
        return None
    return Pose(pose.x, pose.y, slab.top_height + spec.hip_height,
                0.0, spec.nominal_pitch, pose.yaw)


def gait_sufficient(spec: GaitSpec, env: Environment, pose: Pose) -> bool:
    if abs(wrap_angle(pose.roll)) > NOMINAL_TOL:
        return False
    if abs(wrap_angle(pose.pitch - spec.nominal_pitch)) > NOMINAL_TOL:
        return False
    pts = support_points_world(spec, pose)
    slab = slab_under(env, pts[0][0], pts[0][1])
    if slab is None:
        return False
    # single-slab support: no straddling seams or gaps
    for x, y in pts[1:]:
        if not slab.contains(x, y):
            return False
    if abs(pose.z - (slab.top_height + spec.hip_height)) > NOMINAL_TOL:
        return False
    return not shape_collides_env(placed_box(spec.sweep, pose), env)


def gait_necessary(spec: GaitSpec, robot: RobotShape, env: Environment, pose: Pose) -> bool:
    if shape_collides_env(placed_box(robot.pelvis_box, pose), env):
        return False
    slab = slab_under(env, pose.x, pose.y)
    if slab is None:
        return False
    return pose.z - robot.reach_radius <= slab.top_height <= pose.z


def gait_edge_condition(spec: GaitSpec, robot: RobotShape, env: Environment,
                        p_from: Pose, p_to: Pose, sample_step: float,
                        rotation_weight: float, sufficient: bool) -> bool:
    """Gate a motion between two poses by sampling the interpolated poses at
    most sample_step apart (in the exploration metric), endpoints included."""
    d = pose_distance(p_from, p_to, rotation_weight)
    n = max(1, math.ceil(d / sample_step))
    for i in range(n + 1):
        p = interpolate_pose(p_from, p_to, i / n)
        if sufficient:
            if not gait_sufficient(spec, env, p):
                return False
        else:
            if not gait_necessary(spec, robot, env, p):
                return False
    return True


def transition_edge_ok(spec: GaitSpec, partner: GaitSpec, robot: RobotShape,
                       env: Environment, pose_a: Pose, pose_b: Pose,
                       sufficient: bool, k: int = 8) -> bool:
    """Re-check a posture-change edge between the two gait manifolds.

    One endpoint must be valid for this gait and the other for the partner
    gait (either orientation: goal-side components store transition edges
    reversed), and the straight z/pitch interpolation between them must keep
    both sweep volumes clear."""
    if sufficient:
        def valid(g: GaitSpec, p: Pose) -> bool:
            return gait_sufficient(g, env, p)
    else:
        def valid(g: GaitSpec, p: Pose) -> bool:
            return gait_necessary(g, robot, env, p)
    if not ((valid(spec, pose_a) and valid(partner, pose_b))
            or (valid(partner, pose_a) and valid(spec, pose_b))):
        return False
    for j in range(1, k + 1):
        s = j / (k + 1)
        mid = Pose(pose_a.x + s * (pose_b.x - pose_a.x),
                   pose_a.y + s * (pose_b.y - pose_a.y),
                   pose_a.z + s * (pose_b.z - pose_a.z),
                   0.0, pose_a.pitch + s * (pose_b.pitch - pose_a.pitch),
                   pose_a.yaw)
        if shape_collides_env(placed_box(spec.sweep, mid), env):
            return False
        if shape_collides_env(placed_box(partner.sweep, mid), env):
            return False
    return True


def gait_transition_from(spec: GaitSpec, partner: GaitSpec, robot: RobotShape,
                         env: Environment, pose: Pose, sufficient_gate: bool,
                         k: int = 8) -> Pose | None:
    """Entry pose for this gait directly at a partner-gait vertex.

    The candidate shares x, y, yaw with the source pose. It must pass this
    gait's growth gate, and the straight z/pitch interpolation between the
    two postures must keep the union of both gaits' sweep volumes clear, or
    the posture change itself would clip an obstacle.
    """
    candidate = gait_project(spec, env, pose)
    if candidate is None:
        return None
    if sufficient_gate:
        if not gait_sufficient(spec, env, candidate):
            return None
    else:
        if not gait_necessary(spec, robot, env, candidate):
            return None
    for j in range(1, k + 1):
        s = j / (k + 1)
        mid = Pose(pose.x, pose.y, pose.z + s * (candidate.z - pose.z),
                   0.0, pose.pitch + s * (candidate.pitch - pose.pitch), pose.yaw)
        if shape_collides_env(placed_box(spec.sweep, mid), env):
            return None
        if shape_collides_env(placed_box(partner.sweep, mid), env):
            return None
    return candidate
