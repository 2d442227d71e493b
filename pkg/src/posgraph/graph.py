"""The possibility graph: vertices, condition-labelled edges, subgraphs.

Edges carry how strongly their feasibility is known: a sufficient check passed
outright, only a necessary check passed (so the edge is provisional), or a
deferred confirmation job settled it one way or the other. Subgraph membership
is merge-only bookkeeping used as a cheap connectivity pre-filter; the
authoritative answer is always a fresh directed search.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from enum import Enum

from .geometry import Pose, pose_distance, wrap_angle


class PossibilityStatus(Enum):
    IMPOSSIBLE = "impossible"
    INDETERMINATE = "indeterminate"
    POSSIBLE = "possible"


class ConditionLevel(Enum):
    SUFFICIENT_MET = "sufficient_met"
    NECESSARY_ONLY = "necessary_only"
    CONFIRMED = "confirmed"
    REFUTED = "refuted"


_EDGE_STATUS = {
    ConditionLevel.SUFFICIENT_MET: PossibilityStatus.POSSIBLE,
    ConditionLevel.CONFIRMED: PossibilityStatus.POSSIBLE,
    ConditionLevel.NECESSARY_ONLY: PossibilityStatus.INDETERMINATE,
    ConditionLevel.REFUTED: PossibilityStatus.IMPOSSIBLE,
}

# translation bin 0.05 m, angle bin 0.1 rad for the refuted-edge registry
_REG_XYZ = 0.05
_REG_ANG = 0.1


@dataclass
class Vertex:
    id: int
    pose: Pose
    action: str
    subgraph: int
    role: str | None = None  # "start" | "goal" | None


@dataclass
class Edge:
    id: int
    src: int
    dst: int
    action: str
    condition_level: ConditionLevel
    weight: float
    payload: dict | None = None
    kind: str = "gait"  # gait | rotate | transition | jump
    removed: bool = False
    job_spawned: bool = False

    @property
    def status(self) -> PossibilityStatus:
        return _EDGE_STATUS[self.condition_level]


@dataclass
class Subgraph:
    id: int
    vertices: set[int] = field(default_factory=set)
    contains_start: bool = False
    contains_goal: bool = False


def _quantize_pose(p: Pose) -> tuple[int, ...]:
    return (round(p.x / _REG_XYZ), round(p.y / _REG_XYZ), round(p.z / _REG_XYZ),
            round(wrap_angle(p.roll) / _REG_ANG),
            round(wrap_angle(p.pitch) / _REG_ANG),
            round(wrap_angle(p.yaw) / _REG_ANG))


class PossibilityGraph:
    def __init__(self, rotation_weight: float = 0.5, trace=None):
        self.rotation_weight = rotation_weight
        self.trace = trace
        self.vertices: dict[int, Vertex] = {}
        self.edges: dict[int, Edge] = {}
        self.subgraphs: dict[int, Subgraph] = {}
        self._out: dict[int, list[int]] = {}
        self._in: dict[int, list[int]] = {}
        self._next_vertex = 0
        self._next_edge = 0
        self._next_subgraph = 0
        self._refuted_registry: set[tuple] = set()

    # ---- construction ----

    def add_vertex(self, pose: Pose, action: str, seed_subgraph: int | None = None,
                   role: str | None = None) -> Vertex:
        if seed_subgraph is None:
            sid = self._next_subgraph
            self._next_subgraph += 1
            sg = Subgraph(sid)
            self.subgraphs[sid] = sg
        else:
            sg = self.subgraphs[seed_subgraph]
        v = Vertex(self._next_vertex, pose, action, sg.id, role)
        self._next_vertex += 1
        self.vertices[v.id] = v
        sg.vertices.add(v.id)
        if role == "start":
            sg.contains_start = True
        elif role == "goal":
            sg.contains_goal = True
        self._out[v.id] = []
        self._in[v.id] = []
        if self.trace is not None:
            rec = {"vertex": v.id, "action": action, "subgraph": sg.id,
                   "pose": [pose.x, pose.y, pose.z, pose.roll, pose.pitch, pose.yaw]}
            if role:
                rec["role"] = role
            self.trace.emit("vertex_added", **rec)
        return v

    def add_edge(self, src: int, dst: int, action: str, condition_level: ConditionLevel,
                 weight: float, payload: dict | None = None, kind: str = "gait") -> Edge:
        if src not in self.vertices or dst not in self.vertices:
            raise ValueError(f"edge endpoints must exist: {src} -> {dst}")
        if src == dst:
            raise ValueError(f"self-loop on vertex {src}")
        if weight < 0 or not math.isfinite(weight):
            raise ValueError(f"edge weight must be finite and non-negative, got {weight}")
        e = Edge(self._next_edge, src, dst, action, condition_level, weight, payload, kind)
        self._next_edge += 1
        self.edges[e.id] = e
        self._out[src].append(e.id)
        self._in[dst].append(e.id)
        if self.trace is not None:
            rec = {"edge": e.id, "src": src, "dst": dst, "action": action,
                   "level": condition_level.value, "weight": weight, "kind": kind}
            if payload is not None:
                rec["payload"] = payload
            self.trace.emit("edge_added", **rec)
        self._merge_subgraphs(self.vertices[src].subgraph, self.vertices[dst].subgraph)
        return e

    def _merge_subgraphs(self, a: int, b: int):
        if a == b:
            return
        sa, sb = self.subgraphs[a], self.subgraphs[b]
        # smaller set folds into larger; equal sizes keep the older id
        if (len(sa.vertices), -sa.id) < (len(sb.vertices), -sb.id):
            sa, sb = sb, sa
        for vid in sb.vertices:
            self.vertices[vid].subgraph = sa.id
        sa.vertices |= sb.vertices
        sa.contains_start = sa.contains_start or sb.contains_start
        sa.contains_goal = sa.contains_goal or sb.contains_goal
        del self.subgraphs[sb.id]
        if self.trace is not None:
            self.trace.emit("subgraphs_merged", into=sa.id, absorbed=sb.id)

    # ---- edge state ----

    def remove_edge(self, edge_id: int):
        e = self.edges[edge_id]
        if e.removed:
            return
        e.removed = True
        if self.trace is not None:
            self.trace.emit("edge_removed", edge=edge_id)

    def mark_edge(self, edge_id: int, level: ConditionLevel):
        e = self.edges[edge_id]
        if e.condition_level is not ConditionLevel.NECESSARY_ONLY:
            raise ValueError(
                f"edge {edge_id} is {e.condition_level.value}; only necessary_only "
                "edges can be re-labelled")
        if level is ConditionLevel.CONFIRMED:
            e.condition_level = level
            e.removed = False  # reinstated for routing
        elif level is ConditionLevel.REFUTED:
            e.condition_level = level
            e.removed = True
            self.register_refuted(e.action,
                                  self.vertices[e.src].pose, self.vertices[e.dst].pose)
        else:
            raise ValueError(f"cannot re-label edge {edge_id} to {level.value}")

    # ---- refuted-edge registry ----

    def register_refuted(self, action: str, pose_a: Pose, pose_b: Pose):
        self._refuted_registry.add((action, _quantize_pose(pose_a), _quantize_pose(pose_b)))

    def refuted_registry_contains(self, action: str, pose_a: Pose, pose_b: Pose) -> bool:
        return (action, _quantize_pose(pose_a), _quantize_pose(pose_b)) in self._refuted_registry

    # ---- queries ----

    def out_edges(self, vid: int):
        for eid in self._out[vid]:
            e = self.edges[eid]
            if not e.removed:
                yield e

    def in_edges(self, vid: int):
        for eid in self._in[vid]:
            e = self.edges[eid]
            if not e.removed:
                yield e

    def connected(self, src: int, dst: int) -> bool:
        """Directed reachability over non-removed edges, recomputed fresh.

        Shared subgraph membership is only a pre-filter: distinct subgraphs
        cannot be connected, but a shared one proves nothing (edge removal
        never splits subgraphs).
        """
        if src not in self.vertices or dst not in self.vertices:
            raise ValueError("connectivity endpoints must exist")
        if self.vertices[src].subgraph != self.vertices[dst].subgraph:
            return False
        if src == dst:
            return True
        seen = {src}
        frontier = [src]
        while frontier:
            nxt = []
            for vid in frontier:
                for e in self.out_edges(vid):
                    if e.dst == dst:
                        return True
                    if e.dst not in seen:
                        seen.add(e.dst)
                        nxt.append(e.dst)
            frontier = nxt
        return False

    def shortest_path(self, src: int, dst: int) -> list[Edge]:
        """Minimum-weight directed path; ties broken by the lexicographically
        smallest edge-id sequence, so extraction is deterministic."""
        if not self.connected(src, dst):
            raise ValueError(f"no path from {src} to {dst}")
        if src == dst:
            return []
        heap = [(0.0, (), src)]
        closed = set()
        while heap:
            dist, seq, vid = heapq.heappop(heap)
            if vid in closed:
                continue
            if vid == dst:
                return [self.edges[eid] for eid in seq]
            closed.add(vid)
            for e in self.out_edges(vid):
                if e.dst not in closed:
                    heapq.heappush(heap, (dist + e.weight, seq + (e.id,), e.dst))
        raise ValueError(f"no path from {src} to {dst}")  # unreachable after connected()

    def closest_vertex(self, subgraph: int, target: Pose, action: str | None = None) -> Vertex | None:
        best = None
        best_key = None
        for vid in self.subgraphs[subgraph].vertices:
            v = self.vertices[vid]
            if action is not None and v.action != action:
                continue
            key = (pose_distance(v.pose, target, self.rotation_weight), vid)
            if best_key is None or key < best_key:
                best, best_key = v, key
        return best

    def upstream_from_goal(self, vid: int) -> bool:
        return self.subgraphs[self.vertices[vid].subgraph].contains_goal

    def downstream_from_start(self, vid: int) -> bool:
        return self.subgraphs[self.vertices[vid].subgraph].contains_start

    def vertices_of_action(self, action: str):
        for v in self.vertices.values():
            if v.action == action:
                yield v

    def subgraphs_of_action(self, action: str) -> dict[int, list[int]]:
        """Connected components as seen by one action: only its own vertices."""
        out: dict[int, list[int]] = {}
        for v in self.vertices.values():
            if v.action == action:
                out.setdefault(v.subgraph, []).append(v.id)
        return out

    def ancestors_of(self, vid: int) -> set[int]:
        """Vertices that can reach vid (vid included)."""
        seen = {vid}
        frontier = [vid]
        while frontier:
            nxt = []
            for w in frontier:
                for e in self.in_edges(w):
                    if e.src not in seen:
                        seen.add(e.src)
                        nxt.append(e.src)
            frontier = nxt
        return seen

    def descendants_of(self, vid: int) -> set[int]:
        """Vertices reachable from vid (vid included)."""
        seen = {vid}
        frontier = [vid]
        while frontier:
            nxt = []
            for w in frontier:
                for e in self.out_edges(w):
                    if e.dst not in seen:
                        seen.add(e.dst)
                        nxt.append(e.dst)
            frontier = nxt
        return seen
