"""Top-down SVG rendering of planner traces.

The renderer replays a trace into a lightweight graph state, then draws a
plan view: ground slabs gray over a white background (so floor gaps show as
white), obstacles dark, action edges in their signature colors, and the
solution path overdrawn at doubled stroke width. Jump edges are parabolas
seen from above, so they appear as straight chords annotated with launch
speed and angle.

Output bytes are a pure function of the trace records.
"""

from __future__ import annotations

import math

from .trace import parse_trace

BACKGROUND_COLOR = "#ffffff"
SLAB_COLOR = "#b8b8b8"
OBSTACLE_COLOR = "#3a3a3a"
WALK_COLOR = "#2e9e44"        # green
CRAWL_COLOR = "#7fc4e8"       # light blue
JUMP_COLOR = "#ff00ff"        # fuchsia
MARKER_COLOR = "#111111"

ACTION_COLORS = {"walk": WALK_COLOR, "crawl": CRAWL_COLOR, "jump": JUMP_COLOR}

_EDGE_STROKE = 1.6
_PAD_M = 0.5


def _fmt(v: float) -> str:
    # fixed decimals keep the output byte-stable across replays
    return f"{v:.2f}"


class _Replay:
    """Graph state reconstructed from trace records."""

    def __init__(self, records: list[dict]):
        self.scenario: dict | None = None
        self.vertices: dict[int, dict] = {}
        self.edges: dict[int, dict] = {}
        self.solution_edges: list[int] = []
        for rec in records:
            ev = rec["event"]
            if ev == "run_started":
                self.scenario = rec.get("scenario")
            elif ev == "vertex_added":
                self.vertices[rec["vertex"]] = rec
            elif ev == "edge_added":
                e = dict(rec)
                e["removed"] = False
                self.edges[rec["edge"]] = e
            elif ev == "edge_removed":
                if rec["edge"] in self.edges:
                    self.edges[rec["edge"]]["removed"] = True
            elif ev == "job_resolved":
                # a confirmed verdict reinstates the edge pulled at spawn
                if rec["edge"] in self.edges:
                    self.edges[rec["edge"]]["removed"] = rec["verdict"] != "confirmed"
            elif ev == "solution_found":
                self.solution_edges = list(rec["edges"])

    def bounds(self) -> tuple[float, float, float, float]:
        xs: list[float] = []
        ys: list[float] = []
        if self.scenario is not None:
            sb = self.scenario.get("sampling_bounds")
            if sb:
                xs += [sb[0], sb[1]]
                ys += [sb[2], sb[3]]
            for slab in self.scenario.get("environment", {}).get("slabs", []):
                xs += list(slab["x_range"])
                ys += list(slab["y_range"])
        for v in self.vertices.values():
            xs.append(v["pose"][0])
            ys.append(v["pose"][1])
        if not xs:
            xs, ys = [0.0, 1.0], [0.0, 1.0]
        return min(xs), max(xs), min(ys), max(ys)


def _footprint(cx: float, cy: float, hx: float, hy: float, yaw: float):
    c, s = math.cos(yaw), math.sin(yaw)
    return [(cx + dx * c - dy * s, cy + dx * s + dy * c)
            for dx, dy in ((hx, hy), (-hx, hy), (-hx, -hy), (hx, -hy))]


def render_svg(records: list[dict], scale: float = 60.0) -> str:
    replay = _Replay(records)
    x0, x1, y0, y1 = replay.bounds()
    x0 -= _PAD_M
    y0 -= _PAD_M
    x1 += _PAD_M
    y1 += _PAD_M
    width = (x1 - x0) * scale
    height = (y1 - y0) * scale

    def px(x: float) -> str:
        return _fmt((x - x0) * scale)

    def py(y: float) -> str:
        return _fmt((y1 - y) * scale)  # y grows upward in world, downward in SVG

    out: list[str] = []
    out.append(f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" '
               f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">')
    out.append(f'<rect x="0" y="0" width="{_fmt(width)}" height="{_fmt(height)}" '
               f'fill="{BACKGROUND_COLOR}"/>')

    if replay.scenario is not None:
        env = replay.scenario.get("environment", {})
        for slab in env.get("slabs", []):
            sx0, sx1 = slab["x_range"]
            sy0, sy1 = slab["y_range"]
            out.append(f'<rect x="{px(sx0)}" y="{py(sy1)}" '
                       f'width="{_fmt((sx1 - sx0) * scale)}" '
                       f'height="{_fmt((sy1 - sy0) * scale)}" fill="{SLAB_COLOR}"/>')
        for box in env.get("obstacles", []):
            cx, cy, _ = box["center"]
            hx, hy, _ = box["half_extents"]
            pts = " ".join(f"{px(wx)},{py(wy)}"
                           for wx, wy in _footprint(cx, cy, hx, hy, box["yaw"]))
            out.append(f'<polygon points="{pts}" fill="{OBSTACLE_COLOR}"/>')

    def edge_svg(edge: dict, stroke_width: float) -> list[str]:
        src = replay.vertices.get(edge["src"])
        dst = replay.vertices.get(edge["dst"])
        if src is None or dst is None:
            return []
        color = ACTION_COLORS.get(edge["action"], MARKER_COLOR)
        ax, ay = src["pose"][0], src["pose"][1]
        bx, by = dst["pose"][0], dst["pose"][1]
        parts = [f'<line x1="{px(ax)}" y1="{py(ay)}" x2="{px(bx)}" y2="{py(by)}" '
                 f'stroke="{color}" stroke-width="{_fmt(stroke_width)}"/>']
        if edge["kind"] == "jump" and edge.get("payload"):
            p = edge["payload"]
            label = (f'v0={p["v0"]:.2f} theta={math.degrees(p["theta"]):.0f}'
                     if "v0" in p and "theta" in p else "jump")
            mx, my = (ax + bx) / 2.0, (ay + by) / 2.0
            parts.append(f'<text x="{px(mx)}" y="{py(my)}" font-size="9" '
                         f'fill="{JUMP_COLOR}">{label}</text>')
        return parts

    for eid in sorted(replay.edges):
        edge = replay.edges[eid]
        if edge["removed"]:
            continue
        out.extend(edge_svg(edge, _EDGE_STROKE))

    for eid in replay.solution_edges:
        if eid in replay.edges:
            out.extend(edge_svg(replay.edges[eid], _EDGE_STROKE * 2.0))

    for v in replay.vertices.values():
        role = v.get("role")
        if role == "start":
            out.append(f'<circle cx="{px(v["pose"][0])}" cy="{py(v["pose"][1])}" '
                       f'r="5.00" fill="{MARKER_COLOR}"/>')
        elif role == "goal":
            out.append(f'<circle cx="{px(v["pose"][0])}" cy="{py(v["pose"][1])}" '
                       f'r="5.00" fill="none" stroke="{MARKER_COLOR}" stroke-width="2.00"/>')

    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_trace_text(text: str, scale: float = 60.0) -> str:
    """Render a raw trace document; propagates TraceError for bad input."""
    return render_svg(parse_trace(text), scale)
