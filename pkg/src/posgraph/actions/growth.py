"""Growth engines: how each planner iteration adds vertices and edges.

Three entry points, called once per action per iteration:

  perform_transitions  drain a bounded number of pending cross-action entries
  grow                 dispatch to the holonomic or nonholonomic engine,
                       subject to the action's skip probability
  (engines)            holonomic bidirectional connect / jump growth

Components only ever contain the start, the goal, or both, so edge direction
follows the component: growth from a goal-only component inserts edges
reversed, pointing travel toward the goal.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from ..geometry import Pose, pose_distance
from ..graph import Edge, PossibilityGraph, Vertex
from .base import TRANSITION_EDGE_WEIGHT, Action, EdgeCandidate, GaitAction, JumpAction

REACHED_TOL = 1e-9


@dataclass
class GrowthResult:
    vertices: list[Vertex] = field(default_factory=list)
    edges: list[Edge] = field(default_factory=list)
    skipped: bool = False

    def merge(self, other: "GrowthResult") -> None:
        self.vertices.extend(other.vertices)
        self.edges.extend(other.edges)


def _reversed_component(graph: PossibilityGraph, vertex: Vertex) -> bool:
    sg = graph.subgraphs[vertex.subgraph]
    return sg.contains_goal and not sg.contains_start


def perform_transitions(action: Action, graph: PossibilityGraph,
                        rng: random.Random, max_count: int) -> GrowthResult:
    result = GrowthResult()
    for _ in range(max_count):
        if len(action.transition_queue) == 0:
            break
        vid = action.transition_queue.pop_random(rng)
        vertex = graph.vertices[vid]
        if vertex.action == action.name:
            continue
        pose = action.transition_from(vertex)
        if pose is None:
            continue
        new_v = graph.add_vertex(pose, action.name, seed_subgraph=vertex.subgraph)
        if _reversed_component(graph, vertex):
            src, dst = new_v.id, vertex.id
        else:
            src, dst = vertex.id, new_v.id
        edge = graph.add_edge(src, dst, action.name, action.gate_level,
                              TRANSITION_EDGE_WEIGHT, kind="transition")
        result.vertices.append(new_v)
        result.edges.append(edge)
    return result


def grow(action: Action, graph: PossibilityGraph, p_target: Pose,
         rng: random.Random) -> GrowthResult:
    # one draw per call keeps the stream position independent of the outcome
    if rng.random() < action.skip_probability:
        return GrowthResult(skipped=True)
    if action.is_holonomic:
        return holonomic_grow_towards(action, graph, p_target)
    return nonholonomic_grow_towards(action, graph, p_target)


def holonomic_grow_towards(action: GaitAction, graph: PossibilityGraph,
                           p_target: Pose) -> GrowthResult:
    """Bidirectional connect: extend the closest subgraph toward the target,
    then a second subgraph toward wherever the first chain stopped, joining
    the two when the second arrives."""
    result = GrowthResult()
    by_subgraph = graph.subgraphs_of_action(action.name)
    if not by_subgraph:
        return result
    entries = []
    for sid, vids in by_subgraph.items():
        best = min(vids, key=lambda v: (pose_distance(graph.vertices[v].pose,
                                                      p_target,
                                                      action.rotation_weight), v))
        d = pose_distance(graph.vertices[best].pose, p_target, action.rotation_weight)
        entries.append((d, sid, best))
    entries.sort(key=lambda e: (e[0], e[1]))

    _, _, v0_id = entries[0]
    first = connect(action, graph, graph.vertices[v0_id], p_target, None)
    result.merge(first)

    join_vertex = first.vertices[-1] if first.vertices else None
    second_target = join_vertex.pose if join_vertex is not None else p_target

    i = 1
    if graph.upstream_from_goal(v0_id):
        # a second goal-connected subgraph joining the first buys nothing
        while i < len(entries) and graph.upstream_from_goal(entries[i][2]):
            i += 1
    if i < len(entries):
        _, _, v1_id = entries[i]
        second = connect(action, graph, graph.vertices[v1_id], second_target,
                         join_vertex)
        result.merge(second)
    return result


def connect(action: GaitAction, graph: PossibilityGraph, v_from: Vertex,
            p_target: Pose, join_vertex: Vertex | None) -> GrowthResult:
    """Grow a chain of fixed-size steps from v_from toward p_target, stopping
    at the first pose or edge that fails the growth gate. When the chain
    arrives and join_vertex is given, close the loop onto it instead of
    duplicating its pose."""
    result = GrowthResult()
    reversed_dir = _reversed_component(graph, v_from)
    last = v_from
    raw = v_from.pose
    budget = int(pose_distance(raw, p_target, action.rotation_weight)
                 / action.step_size) + 3
    for _ in range(budget):
        raw = action.extend_towards(raw, p_target)
        reached = raw is p_target or pose_distance(
            raw, p_target, action.rotation_weight) <= REACHED_TOL
        pose = action.project(raw)
        if pose is None:
            break
        if reached and join_vertex is not None:
            cand = EdgeCandidate(last.pose, join_vertex.pose, action.name)
            if not action.gate_edge(cand):
                break
            if reversed_dir:
                src, dst = join_vertex.id, last.id
            else:
                src, dst = last.id, join_vertex.id
            edge = graph.add_edge(src, dst, action.name, action.gate_level,
                                  pose_distance(last.pose, join_vertex.pose,
                                                action.rotation_weight))
            result.edges.append(edge)
            break
        if not action.gate_pose(pose):
            break
        cand = EdgeCandidate(last.pose, pose, action.name)
        if not action.gate_edge(cand):
            break
        new_v = graph.add_vertex(pose, action.name, seed_subgraph=last.subgraph)
        if reversed_dir:
            src, dst = new_v.id, last.id
        else:
            src, dst = last.id, new_v.id
        edge = graph.add_edge(src, dst, action.name, action.gate_level,
                              pose_distance(last.pose, pose, action.rotation_weight))
        result.vertices.append(new_v)
        result.edges.append(edge)
        last = new_v
        if reached:
            break
    return result


def nonholonomic_grow_towards(action: JumpAction, graph: PossibilityGraph,
                              p_target: Pose) -> GrowthResult:
    """Jump growth over existing gait vertices, nearest the target first.

    Walk vertices not already goal-connected try a forward jump toward the
    target; crawl vertices not already start-connected try a reverse jump
    (a landing served from the target side). A success clears the whole
    chain behind it from the useful set, so one sample cannot spray jumps
    from every vertex of the same component.
    """
    result = GrowthResult()
    takeoff_name = action.takeoff.name
    landing_name = action.landing.name
    cands = [v for v in graph.vertices.values()
             if v.action in (takeoff_name, landing_name)]
    cands.sort(key=lambda v: (pose_distance(v.pose, p_target,
                                            action.takeoff.rotation_weight), v.id))
    useful = {v.id for v in cands}
    for v in cands:
        if v.id not in useful:
            continue
        if v.action == takeoff_name and not graph.upstream_from_goal(v.id):
            if _try_forward_jump(action, graph, v, p_target, result):
                useful.difference_update(graph.ancestors_of(v.id))
        elif v.action == landing_name and not graph.downstream_from_start(v.id):
            if _try_reverse_jump(action, graph, v, p_target, result):
                useful.difference_update(graph.descendants_of(v.id))
    return result


def _attach_rotated(action: JumpAction, graph: PossibilityGraph, v: Vertex,
                    pose: Pose, gait: GaitAction, outgoing: bool,
                    result: GrowthResult) -> Vertex | None:
    """Reuse v when the pose already matches; otherwise add a rotate-in-place
    connector vertex next to it, gated by the gait that performs the turn."""
    if pose == v.pose:
        return v
    if outgoing:
        cand = EdgeCandidate(v.pose, pose, gait.name, kind="rotate")
    else:
        cand = EdgeCandidate(pose, v.pose, gait.name, kind="rotate")
    if not gait.gate_edge(cand):
        return None
    new_v = graph.add_vertex(pose, gait.name, seed_subgraph=v.subgraph)
    if outgoing:
        src, dst = v.id, new_v.id
    else:
        src, dst = new_v.id, v.id
    weight = pose_distance(v.pose, pose, gait.rotation_weight)
    edge = graph.add_edge(src, dst, gait.name, gait.gate_level, weight,
                          kind="rotate")
    result.vertices.append(new_v)
    result.edges.append(edge)
    return new_v


def _try_forward_jump(action: JumpAction, graph: PossibilityGraph, v: Vertex,
                      p_target: Pose, result: GrowthResult) -> bool:
    launch_pose = action.find_launch_point(v.pose, p_target)
    if launch_pose is None:
        return False
    landing_pose = action.extend_towards(launch_pose, p_target)
    if landing_pose.xy_distance(launch_pose) <= REACHED_TOL:
        return False
    if graph.refuted_registry_contains("jump", launch_pose, landing_pose):
        return False
    found = action.necessary_payload(launch_pose, landing_pose)
    if found is None:
        return False
    payload, arc = found
    launch_v = _attach_rotated(action, graph, v, launch_pose, action.takeoff,
                               outgoing=True, result=result)
    if launch_v is None:
        return False
    landing_v = graph.add_vertex(landing_pose, action.landing.name,
                                 seed_subgraph=launch_v.subgraph)
    edge = graph.add_edge(launch_v.id, landing_v.id, action.name,
                          action.gate_level, arc.length, payload=payload,
                          kind="jump")
    result.vertices.append(landing_v)
    result.edges.append(edge)
    return True


def _try_reverse_jump(action: JumpAction, graph: PossibilityGraph, v: Vertex,
                      p_target: Pose, result: GrowthResult) -> bool:
    landing_pose = action.find_landing_point(v.pose, p_target)
    if landing_pose is None:
        return False
    launch_pose = action.reverse_extend(landing_pose, p_target)
    if launch_pose.xy_distance(landing_pose) <= REACHED_TOL:
        return False
    if graph.refuted_registry_contains("jump", launch_pose, landing_pose):
        return False
    found = action.necessary_payload(launch_pose, landing_pose)
    if found is None:
        return False
    payload, arc = found
    landing_v = _attach_rotated(action, graph, v, landing_pose, action.landing,
                                outgoing=False, result=result)
    if landing_v is None:
        return False
    launch_v = graph.add_vertex(launch_pose, action.takeoff.name,
                                seed_subgraph=landing_v.subgraph)
    edge = graph.add_edge(launch_v.id, landing_v.id, action.name,
                          action.gate_level, arc.length, payload=payload,
                          kind="jump")
    result.vertices.append(launch_v)
    result.edges.append(edge)
    return True
