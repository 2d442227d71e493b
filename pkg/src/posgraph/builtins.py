"""Built-in benchmark scenarios.

Five desk-scale rooms exercising the action repertoire:

  three_routes_a   three corridors; the top one is fully walkable
  three_routes_b   bars over every corridor, so the robot must crawl
  three_routes_c   bars plus a floor gap, so the robot must also jump
  hallway          bars to crawl under, then a gap to jump, in one corridor
  double_jump      two gaps with a walled island between them

All dimensions are meters. Bars hang with their undersides at 1.0 m: too low
to walk through (the standing sweep tops out at 1.8 m) and high enough to
crawl under (the crawling sweep tops out at 0.7 m). Floor gaps are 0.8 m
across, which with the support footprints makes the shortest legal jump about
1.3 m against a maximum reachable range just under 1.9 m, leaving launch
windows a bit over half a meter deep.
"""

from __future__ import annotations

import copy
import math

from .world import Scenario, scenario_from_dict

_ROBOT = {
    "walk_sweep": {"center": [0.0, 0.0, 0.10], "half_extents": [0.35, 0.35, 0.90], "yaw": 0.0},
    "crawl_sweep": {"center": [0.0, 0.0, 0.0], "half_extents": [0.45, 0.35, 0.35], "yaw": 0.0},
    "pelvis_box": {"center": [0.0, 0.0, 0.0], "half_extents": [0.15, 0.15, 0.15], "yaw": 0.0},
    "jump_sweep": {"center": [0.0, 0.0, 0.0], "half_extents": [0.35, 0.35, 0.50], "yaw": 0.0},
    "support_points_walk": [[0.12, 0.09], [0.12, -0.09], [-0.12, 0.09], [-0.12, -0.09]],
    "support_points_crawl": [[0.35, 0.22], [0.35, -0.22], [-0.35, 0.22], [-0.35, -0.22]],
    "hip_height_walk": 0.80,
    "hip_height_crawl": 0.35,
    "reach_radius": 0.85,
    "v_max": 3.8,
    "a_max": 25.0,
    "crawl_pitch": -80.0 * math.pi / 180.0,
}

_ALL_ACTIONS = ["walk", "crawl", "jump"]


def _slab(x0, x1, y0, y1, top=0.0):
    return {"x_range": [x0, x1], "y_range": [y0, y1], "top_height": top}


def _box(cx, cy, cz, hx, hy, hz, yaw=0.0):
    return {"center": [cx, cy, cz], "half_extents": [hx, hy, hz], "yaw": yaw}


def _pose(x, y, z, yaw=0.0):
    return {"xyz": [x, y, z], "rpy": [0.0, 0.0, yaw]}


# walls split the room into three corridors, open at both ends; bars block
# standing passage through a corridor while leaving crawling room underneath
_TR_WALLS = [
    _box(5.0, 3.5, 1.0, 2.5, 0.15, 1.0),
    _box(5.0, 6.5, 1.0, 2.5, 0.15, 1.0),
]
_TR_BAR_BOTTOM = _box(5.0, 1.6, 1.15, 0.2, 1.9, 0.15)
_TR_BAR_MIDDLE = _box(5.0, 5.0, 1.15, 0.2, 1.6, 0.15)
_TR_BAR_TOP = _box(5.0, 8.4, 1.15, 0.2, 1.9, 0.15)


def _three_routes(name: str, with_middle_bar: bool, with_gap: bool) -> dict:
    if with_gap:
        slabs = [_slab(-1.0, 7.8, -1.0, 11.0), _slab(8.6, 11.0, -1.0, 11.0)]
    else:
        slabs = [_slab(-1.0, 11.0, -1.0, 11.0)]
    # (a) leaves the straight middle corridor walkable; (b) bars it too, so
    # every corridor forces a crawl
    obstacles = list(_TR_WALLS) + [_TR_BAR_BOTTOM, _TR_BAR_TOP]
    if with_middle_bar:
        obstacles.append(_TR_BAR_MIDDLE)
    return {
        "name": name,
        "environment": {"slabs": slabs, "obstacles": obstacles},
        "robot": dict(_ROBOT),
        "start": _pose(1.0, 5.0, 0.8),
        "goals": [_pose(9.0, 5.0, 0.8)],
        "sampling_bounds": [0.0, 10.0, 0.0, 10.0],
        "enabled_actions": list(_ALL_ACTIONS),
    }


def _hallway() -> dict:
    return {
        "name": "hallway",
        "environment": {
            "slabs": [_slab(-1.0, 2.8, -1.0, 5.0), _slab(3.6, 13.0, -1.0, 5.0)],
            "obstacles": [
                _box(8.8, 2.0, 1.15, 0.2, 2.6, 0.15, yaw=0.0),
                _box(7.2, 2.0, 1.15, 0.2, 2.6, 0.15, yaw=0.35),
                _box(5.8, 2.0, 1.15, 0.2, 2.6, 0.15, yaw=-0.30),
            ],
        },
        "robot": dict(_ROBOT),
        "start": _pose(11.0, 2.0, 0.8, yaw=math.pi),
        "goals": [_pose(1.0, 2.0, 0.8, yaw=math.pi)],
        "sampling_bounds": [0.0, 12.0, 0.0, 4.0],
        "enabled_actions": list(_ALL_ACTIONS),
    }


def _double_jump() -> dict:
    return {
        "name": "double_jump",
        "environment": {
            "slabs": [
                _slab(9.8, 15.0, -1.0, 7.0),
                _slab(5.0, 9.0, -1.0, 7.0),
                _slab(-1.0, 4.2, -1.0, 7.0),
            ],
            "obstacles": [_box(7.0, 3.0, 1.0, 0.3, 1.6, 1.0)],
        },
        "robot": dict(_ROBOT),
        "start": _pose(13.0, 3.0, 0.8, yaw=math.pi),
        "goals": [_pose(1.0, 3.0, 0.8, yaw=math.pi)],
        "sampling_bounds": [0.0, 14.0, 0.0, 6.0],
        "enabled_actions": list(_ALL_ACTIONS),
    }


_BUILDERS = {
    "three_routes_a": lambda: _three_routes("three_routes_a", False, False),
    "three_routes_b": lambda: _three_routes("three_routes_b", True, False),
    "three_routes_c": lambda: _three_routes("three_routes_c", True, True),
    "hallway": _hallway,
    "double_jump": _double_jump,
}

BUILTIN_NAMES = tuple(_BUILDERS)


def builtin_document(name: str) -> dict:
    """Raw scenario document for a builtin, before validation."""
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise KeyError(f"unknown builtin scenario {name!r}; "
                       f"choose from {', '.join(BUILTIN_NAMES)}") from None
    return copy.deepcopy(builder())


def builtin_scenario(name: str) -> Scenario:
    # builtins go through the same validation path as user documents
    return scenario_from_dict(builtin_document(name))
