"""Action construction and lookup for a scenario."""

from __future__ import annotations

from ..config import PlannerConfig
from ..geometry import Pose
from .base import (TRANSITION_EDGE_WEIGHT, Action, EdgeCandidate, GaitAction,
                   JumpAction, TransitionQueue)
from .gait import GaitSpec, gait_necessary, gait_project, gait_sufficient, specs_from_robot
from .growth import GrowthResult, connect, grow, holonomic_grow_towards, \
    nonholonomic_grow_towards, perform_transitions
from .jump import JumpSpec, spec_from_robot

__all__ = [
    "Action", "EdgeCandidate", "GaitAction", "JumpAction", "TransitionQueue",
    "GaitSpec", "JumpSpec", "GrowthResult", "TRANSITION_EDGE_WEIGHT",
    "build_actions", "sufficient_action_for", "grow", "perform_transitions",
    "connect", "holonomic_grow_towards", "nonholonomic_grow_towards",
    "gait_sufficient", "gait_necessary", "gait_project",
]


def build_actions(scenario, config: PlannerConfig | None = None) -> dict[str, Action]:
    """Instantiate the enabled actions, keyed by name in enabled order.

    Jump needs both gaits to exist even when only jump growth is enabled for
    planning, so gait actions are always constructed; only the enabled ones
    appear in the result.
    """
    config = config if config is not None else scenario.planner
    robot = scenario.robot
    env = scenario.environment
    gaits = specs_from_robot(robot)
    walk = GaitAction(gaits["walk"], gaits["crawl"], robot, env, config)
    crawl = GaitAction(gaits["crawl"], gaits["walk"], robot, env, config)
    built = {"walk": walk, "crawl": crawl}
    if "jump" in scenario.enabled_actions:
        built["jump"] = JumpAction(spec_from_robot(robot), walk, crawl,
                                   robot, env, config)
    return {name: built[name] for name in scenario.enabled_actions}


def sufficient_action_for(scenario, pose: Pose) -> str | None:
    """First enabled action whose sufficient condition holds at the pose.

    This is how the start and goal poses get their action tags; jump never
    qualifies because it has no sufficient condition.
    """
    env = scenario.environment
    gaits = specs_from_robot(scenario.robot)
    for name in scenario.enabled_actions:
        spec = gaits.get(name)
        if spec is not None and gait_sufficient(spec, env, pose):
            return name
    return None
