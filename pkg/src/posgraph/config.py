"""Planner configuration record.

Lives in its own module because both the world loader (scenario files embed a
planner block) and the planner itself need it.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

DEFAULT_GATES = (("crawl", "sufficient"), ("jump", "necessary"), ("walk", "sufficient"))


@dataclass(frozen=True)
class PlannerConfig:
    time_limit_s: float = 60.0
    rng_seed: int = 0
    rotation_weight: float = 0.5
    step_size: float = 0.3
    sweep_step: float = 0.05
    jump_skip_probability: float = 0.9
    max_transitions_per_cycle: int = 10
    workers: int = 0
    slice_ms: float = 5.0
    # per-action growth gate: "sufficient" or "necessary"
    gates: tuple[tuple[str, str], ...] = DEFAULT_GATES

    def __post_init__(self):
        if self.time_limit_s <= 0:
            raise ValueError("time_limit_s must be positive")
        if self.step_size <= 0 or self.sweep_step <= 0:
            raise ValueError("step sizes must be positive")
        if not 0.0 <= self.jump_skip_probability <= 1.0:
            raise ValueError("jump_skip_probability must be in [0, 1]")
        if self.max_transitions_per_cycle < 0 or self.workers < 0:
            raise ValueError("counts may not be negative")
        for action, gate in self.gates:
            if gate not in ("sufficient", "necessary"):
                raise ValueError(f"unknown gate {gate!r} for action {action!r}")
        # canonical order so config equality survives dict round-trips
        object.__setattr__(self, "gates", tuple(sorted(self.gates)))

    def gate_for(self, action: str) -> str:
        for name, gate in self.gates:
            if name == action:
                return gate
        return "sufficient"

    def with_overrides(self, **kw) -> "PlannerConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        return replace(self, **kw) if kw else self

    def to_dict(self) -> dict:
        return {
            "time_limit_s": self.time_limit_s,
            "rng_seed": self.rng_seed,
            "rotation_weight": self.rotation_weight,
            "step_size": self.step_size,
            "sweep_step": self.sweep_step,
            "jump_skip_probability": self.jump_skip_probability,
            "max_transitions_per_cycle": self.max_transitions_per_cycle,
            "workers": self.workers,
            "slice_ms": self.slice_ms,
            "gates": {a: g for a, g in self.gates},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PlannerConfig":
        d = dict(d)
        gates = d.pop("gates", None)
        kw = {k: d[k] for k in d}
        if gates is not None:
            kw["gates"] = tuple(sorted(gates.items()))
        return cls(**kw)
