"""Append-only planner trace: one JSON record per line.

Records carry a monotone sequence number and the planner's logical clock (the
outer-loop iteration). Wall times are deliberately absent so that a fixed seed
with inline confirmation reproduces a trace byte for byte.
"""

from __future__ import annotations

import json


class TraceError(ValueError):
    pass


EVENTS = (
    "run_started",
    "vertex_added",
    "edge_added",
    "subgraphs_merged",
    "edge_removed",
    "job_spawned",
    "job_resolved",
    "solution_found",
)


class TraceRecorder:
    def __init__(self):
        self.records: list[dict] = []
        self._seq = 0
        self.clock = 0

    def emit(self, event: str, **payload):
        rec = {"seq": self._seq, "clock": self.clock, "event": event}
        rec.update(payload)
        self.records.append(rec)
        self._seq += 1

    def dumps(self) -> str:
        return "".join(json.dumps(r, sort_keys=True) + "\n" for r in self.records)

    def dump(self, path):
        with open(path, "w") as f:
            f.write(self.dumps())


def parse_trace(text: str) -> list[dict]:
    records = []
    expected_seq = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as e:
            raise TraceError(f"record at line {lineno} is not valid JSON: {e}") from e
        if not isinstance(rec, dict) or "event" not in rec or "seq" not in rec:
            raise TraceError(f"record at line {lineno} lacks event/seq fields")
        if rec["event"] not in EVENTS:
            raise TraceError(f"record at line {lineno} has unknown event {rec['event']!r}")
        if rec["seq"] != expected_seq:
            raise TraceError(f"record at line {lineno} breaks the sequence "
                             f"(got seq {rec['seq']}, expected {expected_seq})")
        expected_seq += 1
        records.append(rec)
    return records


def read_trace(path) -> list[dict]:
    with open(path, "r") as f:
        return parse_trace(f.read())
