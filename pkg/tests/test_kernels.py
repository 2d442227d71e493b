import math
import random

import numpy as np
import pytest

from posgraph import kernels
from posgraph.kernels import available_backends
from posgraph.kernels import reference

from oracles import obb_overlap_oracle


def random_box(rng, span=4.0):
    return (rng.uniform(-span, span), rng.uniform(-span, span), rng.uniform(-span, span),
            rng.uniform(0.05, 1.5), rng.uniform(0.05, 1.5), rng.uniform(0.05, 1.5),
            rng.uniform(-math.pi, math.pi))


def test_compiled_backend_is_active():
    # the editable install builds the extension; the fallback only covers
    # environments without a compiler
    assert kernels.BACKEND_NAME == "compiled"
    names = [m.BACKEND_NAME for m in available_backends()]
    assert names == ["compiled", "pure"]


def test_obb_overlap_matches_polygon_oracle():
    rng = random.Random(11)
    hits = 0
    for _ in range(3000):
        a = random_box(rng)
        b = random_box(rng)
        expected = obb_overlap_oracle(a, b)
        hits += expected
        for mod in available_backends():
            assert mod.obb_overlap(*a, *b) == expected, (a, b)
    # workload exercises both outcomes
    assert 50 < hits < 2950


def test_backends_agree_exactly():
    rng = random.Random(7)
    for _ in range(5000):
        a = random_box(rng)
        b = random_box(rng)
        results = {m.BACKEND_NAME: m.obb_overlap(*a, *b) for m in available_backends()}
        assert len(set(results.values())) == 1, (a, b, results)


def test_exact_touch_counts_as_overlap():
    # faces flush in x: closed-set convention
    a = (0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 0.0)
    b = (2.0, 0.0, 0.0, 1.0, 1.0, 1.0, 0.0)
    for mod in available_backends():
        assert mod.obb_overlap(*a, *b) is True or mod.obb_overlap(*a, *b) == 1
    # z-interval flush
    c = (0.0, 0.0, 2.0, 1.0, 1.0, 1.0, 0.0)
    for mod in available_backends():
        assert mod.obb_overlap(*a, *c)
    # any separation, however small, is a miss
    d = (2.0 + 1e-9, 0.0, 0.0, 1.0, 1.0, 1.0, 0.0)
    for mod in available_backends():
        assert not mod.obb_overlap(*a, *d)


def test_rotated_corner_contact():
    # 45-degree square whose corner reaches exactly x = sqrt(2)
    a = (0.0, 0.0, 0.0, 1.0, 1.0, 1.0, math.pi / 4)
    reach = math.sqrt(2.0)
    b_touch = (reach + 1.0, 0.0, 0.0, 1.0, 1.0, 1.0, 0.0)
    b_clear = (reach + 1.0 + 1e-6, 0.0, 0.0, 1.0, 1.0, 1.0, 0.0)
    for mod in available_backends():
        assert mod.obb_overlap(*a, *b_touch)
        assert not mod.obb_overlap(*a, *b_clear)


def test_z_disjoint_never_overlaps():
    a = (0.0, 0.0, 0.0, 1.0, 1.0, 0.2, 0.3)
    b = (0.0, 0.0, 1.0, 1.0, 1.0, 0.2, -0.8)
    for mod in available_backends():
        assert not mod.obb_overlap(*a, *b)


def obstacle_rows(rng, n, span=4.0):
    return np.array([random_box(rng, span) for _ in range(n)], dtype=np.float64)


def test_box_hits_any_matches_scalar_loop():
    rng = random.Random(23)
    obstacles = obstacle_rows(rng, 12)
    for _ in range(500):
        box = random_box(rng)
        expected = any(reference.obb_overlap(*box, *row) for row in obstacles)
        for mod in available_backends():
            assert mod.box_hits_any(*box, obstacles) == expected


def test_box_hits_any_empty_obstacles():
    empty = np.empty((0, 7), dtype=np.float64)
    for mod in available_backends():
        assert not mod.box_hits_any(0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 0.0, empty)


def test_poses_sweep_matches_per_pose_loop():
    rng = random.Random(37)
    obstacles = obstacle_rows(rng, 8)
    template = (0.1, -0.05, 0.3, 0.4, 0.3, 0.5, 0.2)
    for _ in range(200):
        poses = np.array(
            [[rng.uniform(-4, 4), rng.uniform(-4, 4), rng.uniform(-1, 1),
              rng.uniform(-math.pi, math.pi)] for _ in range(rng.randrange(1, 6))],
            dtype=np.float64)
        expected = any(
            reference.box_hits_any(
                p[0] + template[0] * math.cos(p[3]) - template[1] * math.sin(p[3]),
                p[1] + template[0] * math.sin(p[3]) + template[1] * math.cos(p[3]),
                p[2] + template[2], template[3], template[4], template[5],
                p[3] + template[6], obstacles)
            for p in poses)
        for mod in available_backends():
            assert mod.poses_sweep_hits_any(poses, *template, obstacles) == expected


def test_poses_sweep_template_offset_rotates_with_yaw():
    # template centered 1 m ahead; obstacle sits 1 m north of the pose, so
    # only the yaw=pi/2 pose makes contact
    obstacles = np.array([[0.0, 1.0, 0.0, 0.1, 0.1, 0.5, 0.0]], dtype=np.float64)
    template = (1.0, 0.0, 0.0, 0.2, 0.2, 0.5, 0.0)
    east = np.array([[0.0, 0.0, 0.0, 0.0]], dtype=np.float64)
    north = np.array([[0.0, 0.0, 0.0, math.pi / 2]], dtype=np.float64)
    for mod in available_backends():
        assert not mod.poses_sweep_hits_any(east, *template, obstacles)
        assert mod.poses_sweep_hits_any(north, *template, obstacles)


def test_compiled_requires_contiguous_rows():
    rng = random.Random(51)
    wide = np.array([random_box(rng) + (0.0, 0.0) for _ in range(6)], dtype=np.float64)
    view = wide[:, :7]  # not C-contiguous
    box = random_box(rng)
    with pytest.raises(ValueError):
        kernels.box_hits_any(*box, view)
    fixed = np.ascontiguousarray(view)
    assert kernels.box_hits_any(*box, fixed) == reference.box_hits_any(*box, fixed)
