"""Static world model and its geometric queries.

Everything here is immutable after load. Obstacles are yaw-only oriented
boxes; walkable ground is a set of axis-aligned rectangular slabs. Slabs are
support geometry, never collision geometry: a gap is simply the absence of a
slab underneath.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import kernels
from .config import PlannerConfig
from .geometry import Pose

GRAVITY = 9.81


class ScenarioError(ValueError):
    """Raised for malformed or infeasible scenario documents."""


class AmbiguousSlabError(ValueError):
    """Stacked slabs under one point while allow_stacked_slabs is off."""


@dataclass(frozen=True)
class OrientedBox:
    """Box free to rotate about z only. center/half_extents in meters."""

    center: tuple[float, float, float]
    half_extents: tuple[float, float, float]
    yaw: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        object.__setattr__(self, "half_extents", tuple(float(h) for h in self.half_extents))
        object.__setattr__(self, "yaw", float(self.yaw))
        if len(self.center) != 3 or len(self.half_extents) != 3:
            raise ValueError("center and half_extents must have 3 components")
        for h in self.half_extents:
            if not (h > 0.0) or not math.isfinite(h):
                raise ValueError(f"half extents must be positive, got {self.half_extents}")

    def as_row(self) -> tuple[float, ...]:
        return (*self.center, *self.half_extents, self.yaw)

    def footprint_corners(self) -> list[tuple[float, float]]:
        cx, cy = self.center[0], self.center[1]
        hx, hy = self.half_extents[0], self.half_extents[1]
        c, s = math.cos(self.yaw), math.sin(self.yaw)
        out = []
        for sx, sy in ((hx, hy), (hx, -hy), (-hx, -hy), (-hx, hy)):
            out.append((cx + sx * c - sy * s, cy + sx * s + sy * c))
        return out

    def to_dict(self) -> dict:
        return {"center": list(self.center), "half_extents": list(self.half_extents),
                "yaw": self.yaw}

    @classmethod
    def from_dict(cls, d: dict) -> "OrientedBox":
        return cls(tuple(d["center"]), tuple(d["half_extents"]), float(d.get("yaw", 0.0)))


@dataclass(frozen=True)
class GroundSlab:
    """Axis-aligned walkable rectangle at a fixed top height."""

    x_range: tuple[float, float]
    y_range: tuple[float, float]
    top_height: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "x_range", (float(self.x_range[0]), float(self.x_range[1])))
        object.__setattr__(self, "y_range", (float(self.y_range[0]), float(self.y_range[1])))
        object.__setattr__(self, "top_height", float(self.top_height))
        if not self.x_range[0] < self.x_range[1]:
            raise ValueError(f"empty slab x_range {self.x_range}")
        if not self.y_range[0] < self.y_range[1]:
            raise ValueError(f"empty slab y_range {self.y_range}")

    def contains(self, x: float, y: float) -> bool:
        return (self.x_range[0] <= x <= self.x_range[1]
                and self.y_range[0] <= y <= self.y_range[1])

    def to_dict(self) -> dict:
        return {"x_range": list(self.x_range), "y_range": list(self.y_range),
                "top_height": self.top_height}

    @classmethod
    def from_dict(cls, d: dict) -> "GroundSlab":
        return cls(tuple(d["x_range"]), tuple(d["y_range"]), float(d.get("top_height", 0.0)))


@dataclass(frozen=True)
class Environment:
    slabs: tuple[GroundSlab, ...]
    obstacles: tuple[OrientedBox, ...]
    allow_stacked_slabs: bool = False

    def __post_init__(self):
        object.__setattr__(self, "slabs", tuple(self.slabs))
        object.__setattr__(self, "obstacles", tuple(self.obstacles))

    @cached_property
    def obstacle_array(self) -> np.ndarray:
        if not self.obstacles:
            return np.zeros((0, 7), dtype=np.float64)
        return np.ascontiguousarray([b.as_row() for b in self.obstacles], dtype=np.float64)

    def to_dict(self) -> dict:
        d = {"slabs": [s.to_dict() for s in self.slabs],
             "obstacles": [b.to_dict() for b in self.obstacles]}
        if self.allow_stacked_slabs:
            d["allow_stacked_slabs"] = True
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Environment":
        return cls(tuple(GroundSlab.from_dict(s) for s in d.get("slabs", [])),
                   tuple(OrientedBox.from_dict(b) for b in d.get("obstacles", [])),
                   bool(d.get("allow_stacked_slabs", False)))


@dataclass(frozen=True)
class RobotShape:
    """Collision templates and physical limits.

    All box templates are offsets from the robot root (pelvis) frame and
    rotate with the pose yaw only; the sweep volumes are sized for the
    corresponding nominal posture, so pose pitch never tilts them.
    """

    walk_sweep: OrientedBox
    crawl_sweep: OrientedBox
    pelvis_box: OrientedBox
    jump_sweep: OrientedBox
    support_points_walk: tuple[tuple[float, float], ...]
    support_points_crawl: tuple[tuple[float, float], ...]
    hip_height_walk: float
    hip_height_crawl: float
    reach_radius: float
    v_max: float
    a_max: float
    crawl_pitch: float = -80.0 * math.pi / 180.0

    def __post_init__(self):
        object.__setattr__(self, "support_points_walk",
                           tuple((float(a), float(b)) for a, b in self.support_points_walk))
        object.__setattr__(self, "support_points_crawl",
                           tuple((float(a), float(b)) for a, b in self.support_points_crawl))
        if not self.support_points_walk or not self.support_points_crawl:
            raise ValueError("support point lists may not be empty")
        if self.hip_height_walk <= 0 or self.hip_height_crawl <= 0:
            raise ValueError("hip heights must be positive")
        # the crawl bound is the hard contract; the walk bound keeps the
        # sufficient manifold inside the necessary one (a standing pose whose
        # ground is out of reach would be sufficient-but-not-necessary)
        if self.reach_radius < self.hip_height_crawl:
            raise ValueError("reach_radius must be at least hip_height_crawl")
        if self.reach_radius < self.hip_height_walk:
            raise ValueError("reach_radius must be at least hip_height_walk")
        if self.v_max <= 0 or self.a_max <= 0:
            raise ValueError("v_max and a_max must be positive")

    def to_dict(self) -> dict:
        return {
            "walk_sweep": self.walk_sweep.to_dict(),
            "crawl_sweep": self.crawl_sweep.to_dict(),
            "pelvis_box": self.pelvis_box.to_dict(),
            "jump_sweep": self.jump_sweep.to_dict(),
            "support_points_walk": [list(p) for p in self.support_points_walk],
            "support_points_crawl": [list(p) for p in self.support_points_crawl],
            "hip_height_walk": self.hip_height_walk,
            "hip_height_crawl": self.hip_height_crawl,
            "reach_radius": self.reach_radius,
            "v_max": self.v_max,
            "a_max": self.a_max,
            "crawl_pitch": self.crawl_pitch,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RobotShape":
        return cls(
            walk_sweep=OrientedBox.from_dict(d["walk_sweep"]),
            crawl_sweep=OrientedBox.from_dict(d["crawl_sweep"]),
            pelvis_box=OrientedBox.from_dict(d["pelvis_box"]),
            jump_sweep=OrientedBox.from_dict(d["jump_sweep"]),
            support_points_walk=tuple(tuple(p) for p in d["support_points_walk"]),
            support_points_crawl=tuple(tuple(p) for p in d["support_points_crawl"]),
            hip_height_walk=float(d["hip_height_walk"]),
            hip_height_crawl=float(d["hip_height_crawl"]),
            reach_radius=float(d["reach_radius"]),
            v_max=float(d["v_max"]),
            a_max=float(d["a_max"]),
            crawl_pitch=float(d.get("crawl_pitch", -80.0 * math.pi / 180.0)),
        )


@dataclass(frozen=True)
class Scenario:
    environment: Environment
    robot: RobotShape
    start: Pose
    goals: tuple[Pose, ...]
    sampling_bounds: tuple[float, float, float, float]  # x0, x1, y0, y1
    enabled_actions: tuple[str, ...]
    planner: PlannerConfig = field(default_factory=PlannerConfig)
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "goals", tuple(self.goals))
        object.__setattr__(self, "enabled_actions", tuple(self.enabled_actions))
        object.__setattr__(self, "sampling_bounds",
                           tuple(float(v) for v in self.sampling_bounds))


# ---- Pose (de)serialization helpers ----

def pose_to_dict(p: Pose) -> dict:
    xyz, rpy = p.as_xyz_rpy()
    return {"xyz": xyz, "rpy": rpy}


def pose_from_dict(d: dict) -> Pose:
    return Pose.from_xyz_rpy(d["xyz"], d["rpy"])


# ---- Core queries ----

def box_collides(a: OrientedBox, b: OrientedBox) -> bool:
    """Closed-set overlap test: touching boxes collide."""
    return kernels.obb_overlap(*a.as_row(), *b.as_row())


def shape_collides_env(box: OrientedBox, env: Environment) -> bool:
    """Contact with any obstacle. Ground slabs are not collision geometry."""
    arr = env.obstacle_array
    if arr.shape[0] == 0:
        return False
    return kernels.box_hits_any(*box.as_row(), arr)


def slab_under(env: Environment, x: float, y: float) -> GroundSlab | None:
    """The slab containing (x, y), or None over a gap.

    Closed containment; ties between same-height slabs go to the smaller list
    index. Different heights under one point raise unless the environment
    allows stacking, in which case the highest top wins.
    """
    matches = [s for s in env.slabs if s.contains(x, y)]
    if not matches:
        return None
    if len(matches) == 1:
        return matches[0]
    tops = {s.top_height for s in matches}
    if len(tops) == 1:
        return matches[0]
    if not env.allow_stacked_slabs:
        raise AmbiguousSlabError(
            f"point ({x}, {y}) is under {len(matches)} slabs at different heights")
    return max(matches, key=lambda s: s.top_height)


def placed_box(template: OrientedBox, pose: Pose) -> OrientedBox:
    """Template box carried by a pose: offset rotates with yaw, z adds."""
    c, s = math.cos(pose.yaw), math.sin(pose.yaw)
    tx, ty, tz = template.center
    return OrientedBox(
        (pose.x + tx * c - ty * s, pose.y + tx * s + ty * c, pose.z + tz),
        template.half_extents,
        pose.yaw + template.yaw,
    )


def box_contains_box(outer: OrientedBox, inner: OrientedBox, tol: float = 1e-9) -> bool:
    """All eight corners of inner inside outer (closed, with tolerance)."""
    co, so = math.cos(outer.yaw), math.sin(outer.yaw)
    for cx, cy in inner.footprint_corners():
        for dz in (-inner.half_extents[2], inner.half_extents[2]):
            px, py = cx - outer.center[0], cy - outer.center[1]
            lx = px * co + py * so
            ly = -px * so + py * co
            lz = inner.center[2] + dz - outer.center[2]
            if (abs(lx) > outer.half_extents[0] + tol
                    or abs(ly) > outer.half_extents[1] + tol
                    or abs(lz) > outer.half_extents[2] + tol):
                return False
    return True


# ---- Ballistics ----

@dataclass(frozen=True)
class BallisticArc:
    """Point-mass flight arc in the vertical plane through launch and landing.

    launch: 3d start point; u: horizontal unit direction of travel;
    v0/theta: launch speed and elevation; flight_time covers launch to landing.
    """

    launch: tuple[float, float, float]
    u: tuple[float, float]
    v0: float
    theta: float
    g: float
    flight_time: float

    @property
    def yaw(self) -> float:
        return math.atan2(self.u[1], self.u[0])

    @property
    def horizontal_speed(self) -> float:
        return self.v0 * math.cos(self.theta)

    @property
    def vertical_speed(self) -> float:
        return self.v0 * math.sin(self.theta)

    @property
    def landing(self) -> tuple[float, float, float]:
        return self.point(self.flight_time)

    @property
    def velocity0(self) -> tuple[float, float, float]:
        vh = self.horizontal_speed
        return (vh * self.u[0], vh * self.u[1], self.vertical_speed)

    def point(self, t: float) -> tuple[float, float, float]:
        d = self.horizontal_speed * t
        return (self.launch[0] + d * self.u[0],
                self.launch[1] + d * self.u[1],
                self.launch[2] + self.vertical_speed * t - 0.5 * self.g * t * t)

    def speed(self, t: float) -> float:
        vz = self.vertical_speed - self.g * t
        vh = self.horizontal_speed
        return math.sqrt(vh * vh + vz * vz)

    @property
    def apex_height(self) -> float:
        vz = self.vertical_speed
        if vz <= 0.0:
            return self.launch[2]
        t = min(self.flight_time, vz / self.g)
        return self.point(t)[2]

    @property
    def length(self) -> float:
        """Arc length over the flight (closed form)."""
        vh = self.horizontal_speed
        vz0 = self.vertical_speed

        def F(u):
            r = math.sqrt(u * u + vh * vh)
            return 0.5 * (u * r + vh * vh * math.asinh(u / vh)) if vh > 0 else 0.5 * u * abs(u)

        uT = vz0 - self.g * self.flight_time
        return (F(vz0) - F(uT)) / self.g

    def _segment_count(self, step: float) -> int:
        smax = max(self.speed(0.0), self.speed(self.flight_time))
        bound = smax * self.flight_time
        n = max(1, math.ceil(bound / step))
        return 1 << (n - 1).bit_length()  # power of two: halving step nests samples

    def sample_rows(self, step: float) -> np.ndarray:
        """(N, 4) rows x,y,z,yaw spaced at most `step` apart in arc length."""
        n = self._segment_count(step)
        yaw = self.yaw
        out = np.empty((n + 1, 4), dtype=np.float64)
        for i in range(n + 1):
            t = self.flight_time * i / n
            out[i, 0:3] = self.point(t)
            out[i, 3] = yaw
        return out


@dataclass(frozen=True)
class Segment:
    """Straight path with constant carried yaw, for sweep queries."""

    p0: tuple[float, float, float]
    p1: tuple[float, float, float]
    yaw: float = 0.0

    @property
    def length(self) -> float:
        return math.dist(self.p0, self.p1)

    def _segment_count(self, step: float) -> int:
        n = max(1, math.ceil(self.length / step))
        return 1 << (n - 1).bit_length()

    def sample_rows(self, step: float) -> np.ndarray:
        n = self._segment_count(step)
        out = np.empty((n + 1, 4), dtype=np.float64)
        for i in range(n + 1):
            s = i / n
            out[i, 0] = self.p0[0] + s * (self.p1[0] - self.p0[0])
            out[i, 1] = self.p0[1] + s * (self.p1[1] - self.p0[1])
            out[i, 2] = self.p0[2] + s * (self.p1[2] - self.p0[2])
            out[i, 3] = self.yaw
        return out


def parabola_for(p0, p1, theta: float, g: float = GRAVITY) -> BallisticArc | None:
    """Ballistic arc from p0 to p1 at launch elevation theta.

    Returns None when no real, positive launch speed reaches p1 at that
    elevation. Raises for a degenerate (vertical) jump with zero horizontal
    separation: the elevation parameterization breaks down there.
    """
    dx, dy = p1[0] - p0[0], p1[1] - p0[1]
    dist = math.hypot(dx, dy)
    if dist <= 1e-12:
        raise ValueError("degenerate jump: launch and landing share (x, y)")
    dz = p1[2] - p0[2]
    c = math.cos(theta)
    denom = 2.0 * c * c * (dist * math.tan(theta) - dz)
    if denom <= 0.0:
        return None
    v0_sq = g * dist * dist / denom
    if v0_sq <= 0.0 or not math.isfinite(v0_sq):
        return None
    v0 = math.sqrt(v0_sq)
    flight_time = dist / (v0 * c)
    return BallisticArc((float(p0[0]), float(p0[1]), float(p0[2])),
                        (dx / dist, dy / dist), v0, float(theta), float(g), flight_time)


def sweep_collides(template: OrientedBox, path, env: Environment, step: float) -> bool:
    """True if carrying the template along the path touches any obstacle.

    Path placements are sampled at most `step` apart in arc length, endpoints
    included; sample sets nest when the step is halved, so a finer step can
    only find more contacts.
    """
    arr = env.obstacle_array
    if arr.shape[0] == 0:
        return False
    rows = path.sample_rows(step)
    tx, ty, tz = template.center
    hx, hy, hz = template.half_extents
    return kernels.poses_sweep_hits_any(rows, tx, ty, tz, hx, hy, hz, template.yaw, arr)


# ---- Scenario document handling ----

def scenario_to_dict(s: Scenario) -> dict:
    return {
        "name": s.name,
        "environment": s.environment.to_dict(),
        "robot": s.robot.to_dict(),
        "start": pose_to_dict(s.start),
        "goals": [pose_to_dict(g) for g in s.goals],
        "sampling_bounds": list(s.sampling_bounds),
        "enabled_actions": list(s.enabled_actions),
        "planner": s.planner.to_dict(),
    }


def serialize_scenario(s: Scenario) -> str:
    return json.dumps(scenario_to_dict(s), indent=2, sort_keys=True) + "\n"


def _schema():
    import importlib.resources as res
    with res.files("posgraph.schema").joinpath("scenario.schema.json").open("r") as f:
        return json.load(f)


def _check_schema(doc: dict):
    import jsonschema
    validator = jsonschema.Draft202012Validator(_schema())
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        path = "$" + "".join(f"[{p!r}]" if isinstance(p, str) else f"[{p}]"
                             for p in e.absolute_path)
        raise ScenarioError(f"schema violation at {path}: {e.message}")


KNOWN_ACTIONS = ("walk", "crawl", "jump")


def _check_semantics(s: Scenario):
    if not s.goals:
        raise ScenarioError("field 'goals': at least one goal is required")
    x0, x1, y0, y1 = s.sampling_bounds
    if not (x0 < x1 and y0 < y1):
        raise ScenarioError(f"field 'sampling_bounds': empty bounds {s.sampling_bounds}")
    if not s.enabled_actions:
        raise ScenarioError("field 'enabled_actions': at least one action is required")
    seen = set()
    for a in s.enabled_actions:
        if a not in KNOWN_ACTIONS:
            raise ScenarioError(f"field 'enabled_actions': unknown action {a!r}")
        if a in seen:
            raise ScenarioError(f"field 'enabled_actions': duplicate action {a!r}")
        seen.add(a)
    if "jump" in seen and not {"walk", "crawl"} <= seen:
        raise ScenarioError("field 'enabled_actions': jump requires walk and crawl "
                            "(its endpoints live on those gait manifolds)")
    env = s.environment
    if not env.allow_stacked_slabs:
        for i, a in enumerate(env.slabs):
            for j in range(i + 1, len(env.slabs)):
                b = env.slabs[j]
                if (a.top_height != b.top_height
                        and a.x_range[0] < b.x_range[1] and b.x_range[0] < a.x_range[1]
                        and a.y_range[0] < b.y_range[1] and b.y_range[0] < a.y_range[1]):
                    raise ScenarioError(
                        f"field 'environment.slabs': slabs {i} and {j} overlap in (x, y) "
                        "at different heights; set allow_stacked_slabs to permit this")

    # start and every goal must be immediately usable by some enabled action
    from .actions import sufficient_action_for  # late import: actions depends on world
    try:
        start_ok = sufficient_action_for(s, s.start) is not None
        goal_ok = [sufficient_action_for(s, g) is not None for g in s.goals]
    except ValueError as e:
        raise ScenarioError(f"field 'robot': {e}") from e
    if not start_ok:
        raise ScenarioError("field 'start': pose satisfies no enabled action's "
                            "sufficient condition")
    for gi, ok in enumerate(goal_ok):
        if not ok:
            raise ScenarioError(f"field 'goals[{gi}]': pose satisfies no enabled "
                                "action's sufficient condition")


def scenario_from_dict(doc: dict, validate: bool = True) -> Scenario:
    if validate:
        _check_schema(doc)
    try:
        s = Scenario(
            environment=Environment.from_dict(doc["environment"]),
            robot=RobotShape.from_dict(doc["robot"]),
            start=pose_from_dict(doc["start"]),
            goals=tuple(pose_from_dict(g) for g in doc["goals"]),
            sampling_bounds=tuple(doc["sampling_bounds"]),
            enabled_actions=tuple(doc["enabled_actions"]),
            planner=PlannerConfig.from_dict(doc.get("planner", {})),
            name=doc.get("name", ""),
        )
    except (ValueError, KeyError, TypeError) as e:
        if isinstance(e, ScenarioError):
            raise
        raise ScenarioError(str(e)) from e
    if validate:
        _check_semantics(s)
    return s


def load_scenario(text: str) -> Scenario:
    """Parse and fully validate a scenario document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioError(f"not valid JSON: {e}") from e
    return scenario_from_dict(doc)


def load_scenario_file(path) -> Scenario:
    with open(path, "r") as f:
        return load_scenario(f.read())


def builtin_scenario(name: str) -> Scenario:
    from . import builtins as _b
    return _b.builtin_scenario(name)


def builtin_names() -> tuple[str, ...]:
    from . import builtins as _b
    return _b.BUILTIN_NAMES
