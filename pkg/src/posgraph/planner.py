"""Top-level planning loop.

Each iteration gives every enabled action one turn (drain pending
transitions, then grow toward a fresh random sample), drains confirmation
verdicts, and scans the goals. A goal connected to the start yields a
candidate path; the path is returned once every edge on it is backed by a
sufficient check or a confirmed job, otherwise the necessary-only edges are
pulled and sent to confirmation, and the loop carries on.

With workers=0 the whole run is single-threaded and bit-deterministic for a
fixed seed.
"""

from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass, field

from .actions import EdgeCandidate, build_actions, sufficient_action_for
from .actions.growth import grow, perform_transitions
from .config import PlannerConfig
from .confirm import ConfirmationQueue
from .geometry import Pose
from .graph import ConditionLevel, Edge, PossibilityGraph
from .trace import TraceRecorder
from .world import Scenario, scenario_to_dict

log = logging.getLogger("posgraph.planner")


def random_sample(bounds: tuple[float, float, float, float],
                  rng: random.Random) -> Pose:
    """Uniform exploration target: (x, y) in bounds, yaw in [-pi, pi).
    Height and pitch are left at zero for the actions to project."""
    x0, x1, y0, y1 = bounds
    x = rng.uniform(x0, x1)
    y = rng.uniform(y0, y1)
    yaw = rng.uniform(-3.141592653589793, 3.141592653589793)
    return Pose(x, y, 0.0, yaw=yaw)


@dataclass(frozen=True)
class Solution:
    edges: tuple[Edge, ...]
    poses: tuple[Pose, ...]
    actions: tuple[str, ...]
    weight: float
    goal_index: int
    solve_time_s: float

    def action_sequence(self) -> tuple[str, ...]:
        """Actions in traversal order with consecutive repeats collapsed."""
        seq: list[str] = []
        for a in self.actions:
            if not seq or seq[-1] != a:
                seq.append(a)
        return tuple(seq)


@dataclass
class RunSummary:
    scenario: str
    solved: bool
    timed_out: bool
    iterations: int
    graph_time_s: float
    vertices: int
    edges: int
    jobs_spawned: int
    jobs_confirmed: int
    jobs_refuted: int
    solution_weight: float | None = None
    solution_edges: int | None = None

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class PlanResult:
    solution: Solution | None
    summary: RunSummary
    graph: PossibilityGraph
    trace: TraceRecorder | None = None

    @property
    def solved(self) -> bool:
        return self.solution is not None


@dataclass
class _JobBook:
    next_id: int = 0
    spawned: int = 0
    confirmed: int = 0
    refuted: int = 0
    edge_to_job: dict[int, int] = field(default_factory=dict)


def confirm_path(graph: PossibilityGraph, path: list[Edge], queue: ConfirmationQueue,
                 actions: dict, book: _JobBook, trace: TraceRecorder | None = None) -> bool:
    """Check every edge of a candidate path, spawning confirmation jobs for
    the necessary-only ones. True only when the whole path is already backed
    by sufficient checks or confirmed verdicts.

    Each spawned job removes its edge from the graph, so the next extraction
    routes around it until the verdict lands. At most one job is ever
    spawned per edge."""
    all_confirmed = True
    for edge in path:
        if edge.condition_level in (ConditionLevel.SUFFICIENT_MET,
                                    ConditionLevel.CONFIRMED):
            continue
        cand = EdgeCandidate(graph.vertices[edge.src].pose,
                             graph.vertices[edge.dst].pose,
                             edge.action, edge.kind, edge.payload)
        if any(a.sufficient_edge(cand) for a in actions.values()):
            continue
        all_confirmed = False
        if edge.job_spawned:
            # verdict still pending; the edge should not normally be
            # extractable in this state, but never double-spawn
            continue
        spawner = actions.get(edge.action)
        if spawner is None or not spawner.necessary_edge(cand):
            # can never be confirmed: drop it and remember the refusal
            graph.mark_edge(edge.id, ConditionLevel.REFUTED)
            continue
        graph.remove_edge(edge.id)
        edge.job_spawned = True
        job = spawner.spawn_confirmation_job(book.next_id, edge.id, cand)
        book.edge_to_job[edge.id] = job.job_id
        book.next_id += 1
        book.spawned += 1
        if trace is not None:
            trace.emit("job_spawned", job=job.job_id, edge=edge.id,
                       action=edge.action)
        queue.insert(job)
    return all_confirmed


def find_path(scenario: Scenario, config: PlannerConfig | None = None,
              trace: TraceRecorder | None = None) -> PlanResult:
    config = config if config is not None else scenario.planner
    actions = build_actions(scenario, config)
    rng = random.Random(config.rng_seed)
    graph = PossibilityGraph(config.rotation_weight, trace)
    queue = ConfirmationQueue(config.workers, config.slice_ms)
    book = _JobBook()

    if trace is not None:
        trace.emit("run_started", scenario=scenario_to_dict(scenario),
                   config=config.to_dict())

    start_action = sufficient_action_for(scenario, scenario.start)
    if start_action is None:
        raise ValueError("start pose satisfies no enabled action's sufficient condition")
    t0 = time.perf_counter()
    start_v = graph.add_vertex(scenario.start, start_action, role="start")
    goal_ids = []
    for i, goal in enumerate(scenario.goals):
        goal_action = sufficient_action_for(scenario, goal)
        if goal_action is None:
            raise ValueError(f"goal {i} satisfies no enabled action's sufficient condition")
        goal_ids.append(graph.add_vertex(goal, goal_action, role="goal").id)

    # seed the endpoint vertices into the other actions' transition queues
    for action in actions.values():
        for vid in [start_v.id] + goal_ids:
            if graph.vertices[vid].action != action.name:
                action.transition_queue.push(vid)

    queue.launch()
    solution = None
    goal_index = -1
    iterations = 0
    timed_out = False
    try:
        while True:
            if time.perf_counter() - t0 >= config.time_limit_s:
                timed_out = True
                break
            if trace is not None:
                trace.clock = iterations
            for action in actions.values():
                new_vertices = []
                res = perform_transitions(action, graph, rng,
                                          config.max_transitions_per_cycle)
                new_vertices.extend(res.vertices)
                target = random_sample(scenario.sampling_bounds, rng)
                res = grow(action, graph, target, rng)
                new_vertices.extend(res.vertices)
                for other in actions.values():
                    if other is action:
                        continue
                    for v in new_vertices:
                        if v.action != other.name:
                            other.transition_queue.push(v.id)
            for verdict in queue.drain():
                level = (ConditionLevel.CONFIRMED if verdict.verdict == "confirmed"
                         else ConditionLevel.REFUTED)
                graph.mark_edge(verdict.edge_id, level)
                if level is ConditionLevel.CONFIRMED:
                    book.confirmed += 1
                else:
                    book.refuted += 1
                if trace is not None:
                    trace.emit("job_resolved", job=verdict.job_id,
                               edge=verdict.edge_id, verdict=verdict.verdict,
                               compute_ms=verdict.compute_ms)
            iterations += 1
            for gi, gid in enumerate(goal_ids):
                if not graph.connected(start_v.id, gid):
                    continue
                path = graph.shortest_path(start_v.id, gid)
                if confirm_path(graph, path, queue, actions, book, trace):
                    solve_time = time.perf_counter() - t0
                    poses = [graph.vertices[path[0].src].pose]
                    for e in path:
                        poses.append(graph.vertices[e.dst].pose)
                    solution = Solution(tuple(path), tuple(poses),
                                        tuple(e.action for e in path),
                                        sum(e.weight for e in path),
                                        gi, solve_time)
                    goal_index = gi
                    if trace is not None:
                        trace.emit("solution_found", goal=gid,
                                   edges=[e.id for e in path],
                                   weight=solution.weight)
                    break
            if solution is not None:
                break
    finally:
        queue.shutdown()

    elapsed = time.perf_counter() - t0
    summary = RunSummary(
        scenario=scenario.name, solved=solution is not None,
        timed_out=timed_out, iterations=iterations, graph_time_s=elapsed,
        vertices=len(graph.vertices), edges=len(graph.edges),
        jobs_spawned=book.spawned, jobs_confirmed=book.confirmed,
        jobs_refuted=book.refuted,
        solution_weight=solution.weight if solution else None,
        solution_edges=len(solution.edges) if solution else None,
    )
    log.info("planner finished: scenario=%s solved=%s iterations=%d time=%.3fs",
             scenario.name, summary.solved, iterations, elapsed)
    return PlanResult(solution, summary, graph, trace)


def validate_solution(scenario: Scenario, result: PlanResult) -> list[str]:
    """Independent soundness audit of a returned solution.

    Rebuilds the condition checks from the scenario alone and re-evaluates
    every edge: contiguity, start and goal endpoints, sufficient conditions
    for gait edges, and full take-off plus arc re-confirmation for jump
    edges. Returns a list of problems, empty when the solution is sound.
    """
    problems: list[str] = []
    sol = result.solution
    if sol is None:
        return ["no solution to validate"]
    actions = build_actions(scenario, scenario.planner)
    if not sol.edges:
        return ["solution has no edges"]
    if sol.poses[0] != scenario.start:
        problems.append("solution does not begin at the start pose")
    if sol.poses[-1] not in scenario.goals:
        problems.append("solution does not end at a goal pose")
    for i, edge in enumerate(sol.edges):
        src_pose = sol.poses[i]
        dst_pose = sol.poses[i + 1]
        if edge.condition_level not in (ConditionLevel.SUFFICIENT_MET,
                                        ConditionLevel.CONFIRMED):
            problems.append(f"edge {edge.id}: condition level {edge.condition_level.value}")
            continue
        cand = EdgeCandidate(src_pose, dst_pose, edge.action, edge.kind, edge.payload)
        action = actions.get(edge.action)
        if action is None:
            problems.append(f"edge {edge.id}: unknown action {edge.action!r}")
            continue
        if edge.kind == "jump":
            found = action.necessary_payload(src_pose, dst_pose)
            if found is None:
                problems.append(f"edge {edge.id}: jump arc no longer feasible")
                continue
            job = action.spawn_confirmation_job(0, edge.id, cand)
            if job.step(float("inf")) != "confirmed":
                problems.append(f"edge {edge.id}: jump take-off failed re-confirmation")
        else:
            if not action.sufficient_edge(cand):
                problems.append(f"edge {edge.id}: sufficient condition fails on re-check")
    return problems
