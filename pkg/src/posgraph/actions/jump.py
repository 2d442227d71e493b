"""Standing long jump: ballistic feasibility and nonholonomic growth operators.

A jump edge connects a walk take-off pose to a crawl landing pose along a
parabolic arc. There is no cheap sufficient condition: the necessary check
(endpoint validity, facing, launch speed, swept arc clearance) labels the
edge for later confirmation by a take-off dynamics job.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..geometry import Pose, wrap_angle
from ..world import (BallisticArc, Environment, OrientedBox, RobotShape,
                     parabola_for, sweep_collides)
from .gait import GaitSpec, gait_project, gait_sufficient

DEFAULT_THETA_SET = tuple(math.radians(d) for d in (30.0, 40.0, 45.0, 50.0, 60.0, 70.0))
FACING_TOL = 1e-6
MIN_JUMP_DISTANCE = 1e-9
SHRINK_STEP = 0.05
# loose upper bound on horizontal range over the launch angle set; the exact
# 45-degree flat-ground optimum is v_max^2/g, downhill landings stretch it
RANGE_CAP_FACTOR = 1.6


@dataclass(frozen=True)
class JumpSpec:
    v_max: float
    a_max: float
    sweep: OrientedBox
    theta_set: tuple[float, ...] = DEFAULT_THETA_SET
    g: float = 9.81

    def __post_init__(self) -> None:
        if not self.theta_set:
            raise ValueError("theta_set must be non-empty")
        object.__setattr__(self, "theta_set", tuple(sorted(self.theta_set)))
        for th in self.theta_set:
            if not 0.0 < th < math.pi / 2:
                raise ValueError(f"launch angle {th} outside (0, pi/2)")

    @property
    def range_cap(self) -> float:
        return RANGE_CAP_FACTOR * self.v_max * self.v_max / self.g


def spec_from_robot(robot: RobotShape) -> JumpSpec:
    return JumpSpec(robot.v_max, robot.a_max, robot.jump_sweep)


def launch_speed(dist: float, dz: float, theta: float, g: float) -> float:
    """Speed needed to land dz above the launch point after dist of horizontal
    travel at launch angle theta; inf when the arc cannot get there."""
    denom = 2.0 * math.cos(theta) ** 2 * (dist * math.tan(theta) - dz)
    if denom <= 0.0:
        return math.inf
    return dist * math.sqrt(g / denom)


def reachable(spec: JumpSpec, dist: float, dz: float) -> bool:
    return any(launch_speed(dist, dz, th, spec.g) <= spec.v_max + 1e-12
               for th in spec.theta_set)


def jump_necessary(spec: JumpSpec, walk: GaitSpec, crawl: GaitSpec,
                   env: Environment, p_launch: Pose, p_landing: Pose,
                   sweep_step: float) -> tuple[dict, BallisticArc] | None:
    """Necessary condition for a jump edge.

    Both endpoints must be valid gait poses, the take-off yaw must face the
    landing point, and some angle in the set must give a reachable, clear arc
    at a launch speed the robot can produce. Angles are tried in ascending
    order and the first feasible one is kept; lower angles give flatter,
    faster arcs so ties resolve toward less flight time.
    """
    if not gait_sufficient(walk, env, p_launch):
        return None
    if not gait_sufficient(crawl, env, p_landing):
        return None
    dx = p_landing.x - p_launch.x
    dy = p_landing.y - p_launch.y
    dist = math.hypot(dx, dy)
    if dist <= MIN_JUMP_DISTANCE:
        return None
    bearing = math.atan2(dy, dx)
    if abs(wrap_angle(p_launch.yaw - bearing)) > FACING_TOL:
        return None
    for theta in spec.theta_set:
        arc = parabola_for(p_launch.translation, p_landing.translation, theta, spec.g)
        if arc is None:
            continue
        if arc.v0 > spec.v_max + 1e-12:
            continue
        if sweep_collides(spec.sweep, arc, env, sweep_step):
            continue
        payload = {
            "theta": theta,
            "v0": arc.v0,
            "g": arc.g,
            "flight_time": arc.flight_time,
            "launch": list(arc.launch),
            "u": list(arc.u),
            "length": arc.length,
        }
        return payload, arc
    return None


def arc_from_payload(payload: dict) -> BallisticArc:
    return BallisticArc(tuple(payload["launch"]), tuple(payload["u"]),
                        payload["v0"], payload["theta"], payload["g"],
                        payload["flight_time"])


def jump_extend(spec: JumpSpec, crawl: GaitSpec, env: Environment,
                p_launch: Pose, p_target: Pose) -> Pose:
    """Landing pose reached by jumping from p_launch toward p_target.

    Walks the landing distance back in SHRINK_STEP decrements until the
    landing point is over ground and some launch angle can reach it within
    the speed limit. Degenerate jumps return the launch pose unchanged.
    """
    dx = p_target.x - p_launch.x
    dy = p_target.y - p_launch.y
    span = math.hypot(dx, dy)
    if span <= MIN_JUMP_DISTANCE:
        return p_launch
    ux, uy = dx / span, dy / span
    bearing = math.atan2(dy, dx)
    d = min(span, spec.range_cap)
    while d > SHRINK_STEP / 2:
        raw = Pose(p_launch.x + d * ux, p_launch.y + d * uy, 0.0, yaw=bearing)
        landing = gait_project(crawl, env, raw)
        if landing is not None and reachable(spec, d, landing.z - p_launch.z):
            return landing
        d -= SHRINK_STEP
    return p_launch


def jump_reverse_extend(spec: JumpSpec, walk: GaitSpec, env: Environment,
                        p_landing: Pose, p_target: Pose) -> Pose:
    """Take-off pose from which a jump toward p_landing arrives there, with
    the take-off placed back toward p_target. Mirror of jump_extend; the
    take-off yaw faces the landing point."""
    dx = p_target.x - p_landing.x
    dy = p_target.y - p_landing.y
    span = math.hypot(dx, dy)
    if span <= MIN_JUMP_DISTANCE:
        return p_landing
    ux, uy = dx / span, dy / span
    d = min(span, spec.range_cap)
    while d > SHRINK_STEP / 2:
        # yaw faces from the candidate take-off toward the landing point
        raw = Pose(p_landing.x + d * ux, p_landing.y + d * uy, 0.0,
                   yaw=math.atan2(-uy, -ux))
        launch = gait_project(walk, env, raw)
        if launch is not None and reachable(spec, d, p_landing.z - launch.z):
            return launch
        d -= SHRINK_STEP
    return p_landing


def find_launch_point(walk: GaitSpec, env: Environment, pose: Pose,
                      p_target: Pose) -> Pose | None:
    """Rotate a walk vertex in place to face the target, projected to the
    walk manifold. None when the vertex sits over a gap or on top of the
    target (no facing direction)."""
    dx = p_target.x - pose.x
    dy = p_target.y - pose.y
    if math.hypot(dx, dy) <= MIN_JUMP_DISTANCE:
        return None
    return gait_project(walk, env, Pose(pose.x, pose.y, 0.0, yaw=math.atan2(dy, dx)))


def find_landing_point(crawl: GaitSpec, env: Environment, pose: Pose,
                       p_target: Pose) -> Pose | None:
    """Rotate a crawl vertex in place to face away from the target, so an
    incoming jump from the target side lands aligned with its own arc."""
    dx = pose.x - p_target.x
    dy = pose.y - p_target.y
    if math.hypot(dx, dy) <= MIN_JUMP_DISTANCE:
        return None
    return gait_project(crawl, env, Pose(pose.x, pose.y, 0.0, yaw=math.atan2(dy, dx)))
