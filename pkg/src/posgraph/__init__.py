"""Multi-modal motion planning over a possibility graph.

Sequences walking, crawling, and standing long jumps through obstacle
environments. Growth is gated by cheap necessary or sufficient feasibility
checks; expensive dynamic checks run as deferred confirmation jobs.
"""

from .builtins import BUILTIN_NAMES, builtin_scenario
from .config import PlannerConfig
from .geometry import Pose, interpolate_pose, pose_distance, step_towards
from .graph import ConditionLevel, Edge, PossibilityGraph, PossibilityStatus, Vertex
from .planner import (PlanResult, RunSummary, Solution, find_path, random_sample,
                      validate_solution)
from .trace import TraceError, TraceRecorder, parse_trace, read_trace
from .world import (BallisticArc, Environment, GroundSlab, OrientedBox,
                    RobotShape, Scenario, ScenarioError, load_scenario,
                    load_scenario_file, scenario_from_dict, scenario_to_dict,
                    serialize_scenario)

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_NAMES", "builtin_scenario", "PlannerConfig", "Pose",
    "interpolate_pose", "pose_distance", "step_towards", "ConditionLevel",
    "Edge", "PossibilityGraph", "PossibilityStatus", "Vertex", "PlanResult",
    "RunSummary", "Solution", "find_path", "random_sample", "validate_solution",
    "TraceError", "TraceRecorder", "parse_trace", "read_trace", "BallisticArc",
    "Environment", "GroundSlab", "OrientedBox", "RobotShape", "Scenario",
    "ScenarioError", "load_scenario", "load_scenario_file", "scenario_from_dict",
    "scenario_to_dict", "serialize_scenario", "__version__",
]
