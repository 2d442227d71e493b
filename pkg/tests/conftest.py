from __future__ import annotations

from dataclasses import dataclass

import pytest

from posgraph import builtin_scenario, find_path, validate_solution
from posgraph.planner import RunSummary, Solution
from posgraph.world import scenario_from_dict, scenario_to_dict


@dataclass
class Trial:
    seed: int
    summary: RunSummary
    solution: Solution | None
    problems: list[str] | None  # validator output; None when unsolved


class BatchRunner:
    """Runs seeded trial batches once per session and caches the results so
    the acceptance criteria can share them."""

    def __init__(self):
        self._cache: dict[tuple, list[Trial]] = {}

    def run(self, name: str, actions: tuple[str, ...] | None = None,
            trials: int = 50, seed0: int = 0) -> list[Trial]:
        key = (name, actions, trials, seed0)
        if key not in self._cache:
            base = scenario_to_dict(builtin_scenario(name))
            if actions is not None:
                base["enabled_actions"] = list(actions)
            out = []
            for seed in range(seed0, seed0 + trials):
                doc = dict(base)
                doc["planner"] = dict(base.get("planner", {}))
                doc["planner"]["rng_seed"] = seed
                scenario = scenario_from_dict(doc)
                result = find_path(scenario)
                problems = (validate_solution(scenario, result)
                            if result.solved else None)
                out.append(Trial(seed, result.summary, result.solution, problems))
            self._cache[key] = out
        return self._cache[key]


@pytest.fixture(scope="session")
def batches() -> BatchRunner:
    return BatchRunner()


@pytest.fixture(scope="session")
def flat_scenario():
    """A bare 12x6 slab with no obstacles, start west, goal east."""
    return scenario_from_dict({
        "name": "flat",
        "environment": {"slabs": [{"x_range": [-1.0, 13.0], "y_range": [-1.0, 7.0],
                                   "top_height": 0.0}], "obstacles": []},
        "robot": _robot_doc(),
        "start": {"xyz": [1.0, 3.0, 0.8], "rpy": [0.0, 0.0, 0.0]},
        "goals": [{"xyz": [11.0, 3.0, 0.8], "rpy": [0.0, 0.0, 0.0]}],
        "sampling_bounds": [0.0, 12.0, 0.0, 6.0],
        "enabled_actions": ["walk", "crawl", "jump"],
    })


def _robot_doc() -> dict:
    from posgraph.builtins import builtin_document
    return builtin_document("three_routes_a")["robot"]


@pytest.fixture()
def robot():
    from posgraph.world import RobotShape
    return RobotShape.from_dict(_robot_doc())
