"""Action interface: what the growth engines need from walk, crawl, and jump.

Each action owns its growth gate (which condition level newly grown edges
are checked against), its pending-transition queue, and the operators the
engines call. Gait actions are holonomic; the jump action is not.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from ..config import PlannerConfig
from ..confirm import (CROUCH_DEPTH, DEFAULT_T_RANGE, FINE_SWEEP_STEP,
                       ConfirmationJob, JumpConfirmationJob, TakeoffBVP)
from ..geometry import Pose, step_towards
from ..graph import ConditionLevel, Vertex
from ..world import Environment, RobotShape
from . import gait as gait_ops
from . import jump as jump_ops
from .gait import GaitSpec
from .jump import JumpSpec

TRANSITION_EDGE_WEIGHT = 0.1


@dataclass(frozen=True)
class EdgeCandidate:
    """A potential edge before insertion, as the condition checks see it."""
    src_pose: Pose
    dst_pose: Pose
    action: str
    kind: str = "gait"
    payload: dict | None = None


class TransitionQueue:
    """Vertices of other actions waiting for a transition attempt.

    Each vertex is attempted at most once per action: once popped it never
    re-enters, and pending duplicates are dropped on push.
    """

    def __init__(self) -> None:
        self._items: list[int] = []
        self._pending: set[int] = set()
        self._attempted: set[int] = set()

    def __len__(self) -> int:
        return len(self._items)

    def push(self, vertex_id: int) -> bool:
        if vertex_id in self._pending or vertex_id in self._attempted:
            return False
        self._items.append(vertex_id)
        self._pending.add(vertex_id)
        return True

    def pop_random(self, rng: random.Random) -> int:
        # swap-pop keeps the draw O(1) without ordering the backlog
        i = rng.randrange(len(self._items))
        self._items[i], self._items[-1] = self._items[-1], self._items[i]
        vid = self._items.pop()
        self._pending.discard(vid)
        self._attempted.add(vid)
        return vid


class Action:
    name: str
    is_holonomic: bool

    def __init__(self, gate: str, skip_probability: float = 0.0) -> None:
        if gate not in ("sufficient", "necessary"):
            raise ValueError(f"unknown growth gate {gate!r}")
        self.gate = gate
        self.skip_probability = skip_probability
        self.transition_queue = TransitionQueue()

    @property
    def gate_level(self) -> ConditionLevel:
        return (ConditionLevel.SUFFICIENT_MET if self.gate == "sufficient"
                else ConditionLevel.NECESSARY_ONLY)

    def sufficient_pose(self, pose: Pose) -> bool:
        raise NotImplementedError

    def necessary_pose(self, pose: Pose) -> bool:
        raise NotImplementedError

    def gate_pose(self, pose: Pose) -> bool:
        if self.gate == "sufficient":
            return self.sufficient_pose(pose)
        return self.necessary_pose(pose)

    def sufficient_edge(self, cand: EdgeCandidate) -> bool:
        raise NotImplementedError

    def necessary_edge(self, cand: EdgeCandidate) -> bool:
        raise NotImplementedError

    def gate_edge(self, cand: EdgeCandidate) -> bool:
        if self.gate == "sufficient":
            return self.sufficient_edge(cand)
        return self.necessary_edge(cand)

    def extend_towards(self, pose: Pose, target: Pose) -> Pose:
        raise NotImplementedError

    def project(self, pose: Pose) -> Pose | None:
        raise NotImplementedError

    def transition_from(self, vertex: Vertex) -> Pose | None:
        """Entry pose for this action at another action's vertex, or None."""
        raise NotImplementedError

    def spawn_confirmation_job(self, job_id: int, edge_id: int,
                               cand: EdgeCandidate) -> ConfirmationJob:
        raise NotImplementedError


class GaitAction(Action):
    is_holonomic = True

    def __init__(self, spec: GaitSpec, partner: GaitSpec, robot: RobotShape,
                 env: Environment, config: PlannerConfig) -> None:
        super().__init__(config.gate_for(spec.name))
        self.name = spec.name
        self.spec = spec
        self.partner = partner
        self.robot = robot
        self.env = env
        self.step_size = config.step_size
        self.sweep_step = config.sweep_step
        self.rotation_weight = config.rotation_weight

    def sufficient_pose(self, pose: Pose) -> bool:
        return gait_ops.gait_sufficient(self.spec, self.env, pose)

    def necessary_pose(self, pose: Pose) -> bool:
        return gait_ops.gait_necessary(self.spec, self.robot, self.env, pose)

    def _edge_condition(self, cand: EdgeCandidate, sufficient: bool) -> bool:
        if cand.kind == "jump":
            return False
        if cand.kind == "transition":
            return gait_ops.transition_edge_ok(self.spec, self.partner, self.robot,
                                               self.env, cand.src_pose, cand.dst_pose,
                                               sufficient)
        return gait_ops.gait_edge_condition(self.spec, self.robot, self.env,
                                            cand.src_pose, cand.dst_pose,
                                            self.sweep_step, self.rotation_weight,
                                            sufficient=sufficient)

    def sufficient_edge(self, cand: EdgeCandidate) -> bool:
        return self._edge_condition(cand, sufficient=True)

    def necessary_edge(self, cand: EdgeCandidate) -> bool:
        return self._edge_condition(cand, sufficient=False)

    def extend_towards(self, pose: Pose, target: Pose) -> Pose:
        return step_towards(pose, target, self.step_size, self.rotation_weight)

    def project(self, pose: Pose) -> Pose | None:
        return gait_ops.gait_project(self.spec, self.env, pose)

    def transition_from(self, vertex: Vertex) -> Pose | None:
        if vertex.action != self.partner.name:
            return None
        return gait_ops.gait_transition_from(self.spec, self.partner, self.robot,
                                             self.env, vertex.pose,
                                             self.gate == "sufficient")


class JumpAction(Action):
    is_holonomic = False
    name = "jump"

    def __init__(self, spec: JumpSpec, takeoff: GaitAction, landing: GaitAction,
                 robot: RobotShape, env: Environment, config: PlannerConfig) -> None:
        # jumps have no sufficient condition, so the only usable gate is the
        # necessary one; a configured "sufficient" gate would reject everything
        super().__init__("necessary", config.jump_skip_probability)
        self.spec = spec
        self.takeoff = takeoff
        self.landing = landing
        self.robot = robot
        self.env = env
        self.sweep_step = config.sweep_step

    # take-off and landing poses live on the gait manifolds, so pose validity
    # defers to them; there is no cheap certificate that a jump exists
    def sufficient_pose(self, pose: Pose) -> bool:
        return False

    def necessary_pose(self, pose: Pose) -> bool:
        return (self.takeoff.sufficient_pose(pose)
                or self.landing.sufficient_pose(pose))

    def sufficient_edge(self, cand: EdgeCandidate) -> bool:
        return False

    def necessary_edge(self, cand: EdgeCandidate) -> bool:
        return self.necessary_payload(cand.src_pose, cand.dst_pose) is not None

    def necessary_payload(self, p_launch: Pose, p_landing: Pose):
        return jump_ops.jump_necessary(self.spec, self.takeoff.spec,
                                       self.landing.spec, self.env,
                                       p_launch, p_landing, self.sweep_step)

    def extend_towards(self, pose: Pose, target: Pose) -> Pose:
        return jump_ops.jump_extend(self.spec, self.landing.spec, self.env,
                                    pose, target)

    def reverse_extend(self, pose: Pose, target: Pose) -> Pose:
        return jump_ops.jump_reverse_extend(self.spec, self.takeoff.spec,
                                            self.env, pose, target)

    def find_launch_point(self, pose: Pose, target: Pose) -> Pose | None:
        return jump_ops.find_launch_point(self.takeoff.spec, self.env, pose, target)

    def find_landing_point(self, pose: Pose, target: Pose) -> Pose | None:
        return jump_ops.find_landing_point(self.landing.spec, self.env, pose, target)

    def transition_from(self, vertex: Vertex) -> Pose | None:
        return None

    def spawn_confirmation_job(self, job_id: int, edge_id: int,
                               cand: EdgeCandidate) -> JumpConfirmationJob:
        if cand.payload is None:
            raise ValueError("jump edge has no arc payload to confirm")
        arc = jump_ops.arc_from_payload(cand.payload)
        xT = arc.launch
        x0 = (xT[0], xT[1], xT[2] - CROUCH_DEPTH)
        bvp = TakeoffBVP(x0=x0, xT=xT, vT=arc.velocity0,
                         a_max=self.spec.a_max, g=self.spec.g,
                         T_range=DEFAULT_T_RANGE)
        return JumpConfirmationJob(job_id, edge_id, bvp, arc, self.spec.sweep,
                                   self.env, fine_step=FINE_SWEEP_STEP)
