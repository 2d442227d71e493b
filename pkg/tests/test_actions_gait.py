import math

import pytest

from posgraph.actions.gait import (NOMINAL_TOL, gait_edge_condition,
                                   gait_necessary, gait_project,
                                   gait_sufficient, gait_transition_from,
                                   specs_from_robot, support_points_world,
                                   transition_edge_ok)
from posgraph.geometry import Pose
from posgraph.world import Environment, GroundSlab, OrientedBox, RobotShape


@pytest.fixture
def specs(robot):
    return specs_from_robot(robot)


def flat_env(obstacles=()):
    return Environment(slabs=(GroundSlab((-10.0, 10.0), (-10.0, 10.0), 0.0),),
                       obstacles=tuple(obstacles))


def test_specs_from_robot_wiring(robot, specs):
    walk, crawl = specs["walk"], specs["crawl"]
    assert walk.transition_partner == "crawl"
    assert crawl.transition_partner == "walk"
    assert walk.nominal_pitch == 0.0
    assert crawl.nominal_pitch == robot.crawl_pitch
    assert walk.hip_height == robot.hip_height_walk
    assert crawl.hip_height == robot.hip_height_crawl


def test_specs_from_robot_rejects_sweep_smaller_than_pelvis(robot):
    doc = robot.to_dict()
    doc["walk_sweep"]["half_extents"] = [0.05, 0.05, 0.05]
    with pytest.raises(ValueError, match="pelvis"):
        specs_from_robot(RobotShape.from_dict(doc))


def test_support_points_rotate_with_yaw(specs):
    walk = specs["walk"]
    pts0 = support_points_world(walk, Pose(1.0, 2.0, 0.8, yaw=0.0))
    pts90 = support_points_world(walk, Pose(1.0, 2.0, 0.8, yaw=math.pi / 2))
    for (x0, y0), (x9, y9) in zip(pts0, pts90):
        # a quarter turn about the pose origin maps (dx, dy) to (-dy, dx)
        dx, dy = x0 - 1.0, y0 - 2.0
        assert (x9 - 1.0, y9 - 2.0) == pytest.approx((-dy, dx), abs=1e-12)


def test_gait_project_snaps_and_is_idempotent(specs):
    env = flat_env()
    walk = specs["walk"]
    raw = Pose(2.0, 3.0, 5.0, roll=0.3, pitch=-0.8, yaw=1.2)
    p = gait_project(walk, env, raw)
    assert (p.x, p.y, p.yaw) == (raw.x, raw.y, raw.yaw)
    assert p.z == walk.hip_height
    assert p.roll == 0.0 and p.pitch == walk.nominal_pitch
    assert gait_project(walk, env, p) == p


def test_gait_project_none_over_gap(specs):
    env = Environment(slabs=(GroundSlab((0.0, 1.0), (0.0, 1.0), 0.0),), obstacles=())
    assert gait_project(specs["walk"], env, Pose(5.0, 5.0, 0.0)) is None


def test_gait_sufficient_accepts_projected_pose(specs):
    env = flat_env()
    for spec in specs.values():
        p = gait_project(spec, env, Pose(0.0, 0.0, 0.0, yaw=0.7))
        assert gait_sufficient(spec, env, p)


def test_gait_sufficient_rejects_posture_errors(specs):
    env = flat_env()
    walk = specs["walk"]
    p = gait_project(walk, env, Pose(0.0, 0.0, 0.0))
    assert not gait_sufficient(walk, env, Pose(p.x, p.y, p.z, roll=0.01))
    assert not gait_sufficient(walk, env, Pose(p.x, p.y, p.z, pitch=0.01))
    assert not gait_sufficient(walk, env, Pose(p.x, p.y, p.z + 0.002))
    # tolerance is tight but not zero
    assert gait_sufficient(walk, env, Pose(p.x, p.y, p.z + 0.5 * NOMINAL_TOL))


def test_gait_sufficient_needs_single_slab_support(specs):
    # two flush slabs at the same height: contact straddles the seam
    env = Environment(slabs=(GroundSlab((-5.0, 0.0), (-5.0, 5.0), 0.0),
                             GroundSlab((0.0, 5.0), (-5.0, 5.0), 0.0)),
                     obstacles=())
    walk = specs["walk"]
    p = gait_project(walk, env, Pose(0.0, 0.0, 0.0, yaw=0.0))
    assert not gait_sufficient(walk, env, p)  # feet on both slabs
    off = gait_project(walk, env, Pose(1.0, 0.0, 0.0, yaw=0.0))
    assert gait_sufficient(walk, env, off)


def test_gait_sufficient_rejects_swept_collision(specs):
    walk = specs["walk"]
    bar = OrientedBox((0.0, 0.0, 1.2), (0.5, 0.5, 0.1), 0.0)
    env = flat_env([bar])
    p = gait_project(walk, env, Pose(0.0, 0.0, 0.0))
    assert not gait_sufficient(walk, env, p)
    # crawling fits underneath the same bar
    crawl = specs["crawl"]
    c = gait_project(crawl, env, p)
    assert gait_sufficient(crawl, env, c)


def test_gait_necessary_reach_window(robot, specs):
    env = flat_env()
    walk = specs["walk"]
    # anywhere from standing on the slab up to full reach above it
    assert gait_necessary(walk, robot, env, Pose(0.0, 0.0, 0.0))
    assert gait_necessary(walk, robot, env, Pose(0.0, 0.0, robot.reach_radius))
    assert not gait_necessary(walk, robot, env,
                              Pose(0.0, 0.0, robot.reach_radius + 0.01))
    # below the slab top the supports cannot reach down
    assert not gait_necessary(walk, robot, env, Pose(0.0, 0.0, -0.01))


def test_gait_necessary_rejects_pelvis_collision_and_gap(robot, specs):
    walk = specs["walk"]
    block = OrientedBox((0.0, 0.0, 0.8), (0.3, 0.3, 0.3), 0.0)
    env = flat_env([block])
    assert not gait_necessary(walk, robot, env, Pose(0.0, 0.0, 0.8))
    assert gait_necessary(walk, robot, env, Pose(2.0, 0.0, 0.8))
    gap_env = Environment(slabs=(GroundSlab((0.0, 1.0), (0.0, 1.0), 0.0),), obstacles=())
    assert not gait_necessary(walk, robot, gap_env, Pose(5.0, 5.0, 0.8))


def test_sufficient_implies_necessary_on_samples(robot, specs):
    # spot check of the containment the design hinges on
    env = flat_env([OrientedBox((1.5, 0.0, 1.2), (0.3, 0.3, 0.1), 0.0)])
    import random
    rng = random.Random(13)
    for _ in range(500):
        spec = specs["walk"] if rng.random() < 0.5 else specs["crawl"]
        raw = Pose(rng.uniform(-3, 3), rng.uniform(-3, 3), 0.0,
                   yaw=rng.uniform(-math.pi, math.pi))
        p = gait_project(spec, env, raw)
        if p is not None and gait_sufficient(spec, env, p):
            assert gait_necessary(spec, robot, env, p)


def test_gait_edge_condition_catches_midpath_obstacle(robot, specs):
    walk = specs["walk"]
    bar = OrientedBox((2.0, 0.0, 1.45), (0.2, 2.0, 0.15), 0.0)  # z 1.3..1.6
    env = flat_env([bar])
    a = gait_project(walk, env, Pose(0.0, 0.0, 0.0))
    b = gait_project(walk, env, Pose(4.0, 0.0, 0.0))
    assert gait_sufficient(walk, env, a) and gait_sufficient(walk, env, b)
    # walk sweep reaches z 1.7: blocked mid-way
    assert not gait_edge_condition(walk, robot, env, a, b, 0.1, 0.5, sufficient=True)
    # pelvis box (z 0.65..0.95) passes under the bar
    assert gait_edge_condition(walk, robot, env, a, b, 0.1, 0.5, sufficient=False)
    clear = flat_env()
    a2 = gait_project(walk, clear, a)
    b2 = gait_project(walk, clear, b)
    assert gait_edge_condition(walk, robot, clear, a2, b2, 0.1, 0.5, sufficient=True)


def transition_pair(specs, env, x=0.0, y=0.0, yaw=0.0):
    w = gait_project(specs["walk"], env, Pose(x, y, 0.0, yaw=yaw))
    c = gait_project(specs["crawl"], env, Pose(x, y, 0.0, yaw=yaw))
    return w, c


def test_transition_edge_ok_both_orientations(robot, specs):
    env = flat_env()
    w, c = transition_pair(specs, env)
    walk = specs["walk"]
    crawl = specs["crawl"]
    for level in (True, False):
        assert transition_edge_ok(walk, crawl, robot, env, w, c, level)
        # goal-side components store the edge reversed
        assert transition_edge_ok(walk, crawl, robot, env, c, w, level)
        assert transition_edge_ok(crawl, walk, robot, env, w, c, level)


def test_transition_edge_ok_rejects_same_manifold_endpoints(robot, specs):
    env = flat_env()
    w, _ = transition_pair(specs, env)
    w2 = gait_project(specs["walk"], env, Pose(0.3, 0.0, 0.0))
    assert not transition_edge_ok(specs["walk"], specs["crawl"], robot, env,
                                  w, w2, True)


def test_transition_edge_ok_rejects_mid_posture_collision(robot, specs):
    # obstacle beside the pose: beyond the walk sweep (half x 0.35) but inside
    # the crawl sweep (half x 0.45), at heights z 0.90..1.05 that the crawl
    # sweep only reaches while the root is still descending
    ob = OrientedBox((0.42, 0.0, 0.975), (0.03, 0.10, 0.075), 0.0)
    env = flat_env([ob])
    w, c = transition_pair(specs, env)
    walk, crawl = specs["walk"], specs["crawl"]
    assert gait_sufficient(walk, env, w)
    assert gait_sufficient(crawl, env, c)
    assert not transition_edge_ok(walk, crawl, robot, env, w, c, True)
    assert not transition_edge_ok(walk, crawl, robot, env, c, w, True)


def test_gait_transition_from_posture_change(robot, specs):
    env = flat_env()
    w, _ = transition_pair(specs, env, yaw=0.9)
    crawl = specs["crawl"]
    c = gait_transition_from(crawl, specs["walk"], robot, env, w,
                             sufficient_gate=True)
    assert c is not None
    assert (c.x, c.y, c.yaw) == (w.x, w.y, w.yaw)
    assert c.z == crawl.hip_height
    assert c.pitch == crawl.nominal_pitch


def test_gait_transition_from_respects_gate(robot, specs):
    # floor-level obstacle blocks the crawl sweep but not the walk sweep body
    ob = OrientedBox((0.40, 0.0, 0.2), (0.04, 0.10, 0.2), 0.0)
    env = flat_env([ob])
    w, _ = transition_pair(specs, env)
    assert gait_sufficient(specs["walk"], env, w)
    got = gait_transition_from(specs["crawl"], specs["walk"], robot, env, w,
                               sufficient_gate=True)
    assert got is None


def test_gait_transition_from_rejects_mid_collision(robot, specs):
    ob = OrientedBox((0.42, 0.0, 0.975), (0.03, 0.10, 0.075), 0.0)
    env = flat_env([ob])
    w, _ = transition_pair(specs, env)
    got = gait_transition_from(specs["crawl"], specs["walk"], robot, env, w,
                               sufficient_gate=True)
    assert got is None
    clear = flat_env()
    w2, _ = transition_pair(specs, clear)
    assert gait_transition_from(specs["crawl"], specs["walk"], robot, clear,
                                w2, sufficient_gate=True) is not None


def test_gait_transition_from_none_over_gap(robot, specs):
    env = Environment(slabs=(GroundSlab((0.0, 1.0), (0.0, 1.0), 0.0),), obstacles=())
    pose = Pose(5.0, 5.0, 0.8)
    assert gait_transition_from(specs["crawl"], specs["walk"], robot, env,
                                pose, sufficient_gate=True) is None
