"""Command-line surface: plan, bench, render, validate.

Summaries and reports print as single-line JSON records on stdout for
harness scraping; diagnostics go to stderr. Exit codes: 0 success, 1 error,
2 planner timeout.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import statistics
import sys
from dataclasses import dataclass

from .builtins import BUILTIN_NAMES, builtin_scenario
from .planner import find_path
from .render import render_trace_text
from .trace import TraceError, TraceRecorder
from .world import Scenario, ScenarioError, load_scenario_file, scenario_from_dict, \
    scenario_to_dict

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_TIMEOUT = 2


def _setup_logging() -> None:
    level_name = os.environ.get("PG_LOG", "WARNING").upper()
    level = getattr(logging, level_name, None)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(level=level,
                        format="%(asctime)s %(name)s %(levelname)s %(message)s")


def _add_scenario_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scenario", help="path to a scenario JSON document")
    p.add_argument("--builtin", choices=BUILTIN_NAMES,
                   help="name of a built-in scenario")
    p.add_argument("--actions",
                   help="comma-separated subset of actions to enable, e.g. walk,crawl")


def _add_planner_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="planner RNG seed")
    p.add_argument("--time-limit", type=float, default=None,
                   help="planning time limit in seconds")
    p.add_argument("--skip-prob", type=float, default=None,
                   help="jump growth skip probability in [0, 1)")
    p.add_argument("--workers", type=int, default=0,
                   help="confirmation worker threads; 0 runs jobs inline (deterministic)")


def _load_scenario(args) -> Scenario:
    if bool(args.scenario) == bool(args.builtin):
        raise ScenarioError("exactly one of --scenario or --builtin is required")
    if args.builtin:
        scenario = builtin_scenario(args.builtin)
    else:
        scenario = load_scenario_file(args.scenario)
    overrides = {}
    if getattr(args, "actions", None):
        overrides["enabled_actions"] = [a.strip() for a in args.actions.split(",") if a.strip()]
    planner = {}
    if getattr(args, "seed", None) is not None:
        planner["rng_seed"] = args.seed
    if getattr(args, "time_limit", None) is not None:
        planner["time_limit_s"] = args.time_limit
    if getattr(args, "skip_prob", None) is not None:
        planner["jump_skip_probability"] = args.skip_prob
    if getattr(args, "workers", None) is not None:
        planner["workers"] = args.workers
    if not overrides and not planner:
        return scenario
    doc = scenario_to_dict(scenario)
    doc.update(overrides)
    doc.setdefault("planner", {}).update(planner)
    # rebuilding through the document path re-runs full validation, so an
    # --actions subset that breaks a requirement fails loudly here
    return scenario_from_dict(doc)


def cmd_plan(args) -> int:
    scenario = _load_scenario(args)
    trace = TraceRecorder() if (args.trace_out or args.svg_out) else None
    result = find_path(scenario, trace=trace)
    if args.trace_out:
        trace.dump(args.trace_out)
    if args.svg_out:
        with open(args.svg_out, "w") as f:
            f.write(render_trace_text(trace.dumps()))
    print(json.dumps(result.summary.to_dict(), sort_keys=True))
    return EXIT_OK if result.solved else EXIT_TIMEOUT


@dataclass
class BenchReport:
    scenario: str
    action_count: int
    trials: int
    successes: int
    success_rate: float
    graph_time_mean_s: float | None
    graph_time_std_s: float | None
    vertices_mean: float | None
    edges_mean: float | None

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def run_bench(scenario: Scenario, trials: int, seed0: int) -> BenchReport:
    """Sequential seeded trials; time and size statistics aggregate the
    successful trials only, the success rate counts all of them."""
    summaries = []
    for k in range(trials):
        doc = scenario_to_dict(scenario)
        doc.setdefault("planner", {})["rng_seed"] = seed0 + k
        summaries.append(find_path(scenario_from_dict(doc)).summary)
    wins = [s for s in summaries if s.solved]
    report = BenchReport(
        scenario=scenario.name,
        action_count=len(scenario.enabled_actions),
        trials=trials,
        successes=len(wins),
        success_rate=len(wins) / trials,
        graph_time_mean_s=statistics.fmean(s.graph_time_s for s in wins) if wins else None,
        graph_time_std_s=statistics.pstdev([s.graph_time_s for s in wins]) if wins else None,
        vertices_mean=statistics.fmean(s.vertices for s in wins) if wins else None,
        edges_mean=statistics.fmean(s.edges for s in wins) if wins else None,
    )
    return report


def cmd_bench(args) -> int:
    if args.trials < 1:
        raise ScenarioError("--trials must be at least 1")
    scenario = _load_scenario(args)
    report = run_bench(scenario, args.trials, args.seed)
    print(json.dumps(report.to_dict(), sort_keys=True))
    return EXIT_OK


def cmd_render(args) -> int:
    with open(args.trace, "r") as f:
        text = f.read()
    svg = render_trace_text(text)
    if args.svg_out:
        with open(args.svg_out, "w") as f:
            f.write(svg)
    else:
        sys.stdout.write(svg)
    return EXIT_OK


def cmd_validate(args) -> int:
    if args.path:
        load_scenario_file(args.path)
    else:
        _load_scenario(args)
    print(json.dumps({"valid": True}, sort_keys=True))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="posgraph",
        description="Multi-modal motion planning over a possibility graph")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="run the planner once")
    _add_scenario_args(p)
    _add_planner_args(p)
    p.add_argument("--trace-out", help="write the JSONL event trace here")
    p.add_argument("--svg-out", help="render the run to SVG here")
    p.set_defaults(fn=cmd_plan)

    p = sub.add_parser("bench", help="run seeded trials and report statistics")
    _add_scenario_args(p)
    _add_planner_args(p)
    p.add_argument("--trials", type=int, default=50)
    p.set_defaults(fn=cmd_bench)

    p = sub.add_parser("render", help="render a trace file to SVG")
    p.add_argument("trace", help="path to a JSONL trace")
    p.add_argument("--svg-out", help="output path; stdout when omitted")
    p.set_defaults(fn=cmd_render)

    p = sub.add_parser("validate", help="validate a scenario document")
    p.add_argument("path", nargs="?", help="path to a scenario JSON document")
    _add_scenario_args(p)
    p.set_defaults(fn=cmd_validate)

    return parser


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ScenarioError, TraceError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
