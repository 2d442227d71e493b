"""Deferred confirmation: take-off dynamics checks and the job queue.

A provisional jump edge is confirmed by (a) solving a crouch-to-launch
boundary value problem that must reach the arc's initial velocity from rest
within the robot's acceleration limits, and (b) re-checking the flight arc
against obstacles at a fine sampling step. Jobs run incrementally so a worker
pool can round-robin many of them in small time slices; with zero workers
they run inline at spawn, which is the deterministic mode.
"""

from __future__ import annotations

import math
import queue
import threading
import time
from collections import deque
from dataclasses import dataclass

DEFAULT_T_RANGE = (0.1, 2.0)
DEFAULT_T_TOL = 1e-3
CROUCH_DEPTH = 0.25       # m below the take-off point where the crouch starts
FINE_SWEEP_STEP = 0.01    # m, confirmation-grade arc sampling
_GRID_POINTS = 40
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

RUNNING = "running"
CONFIRMED = "confirmed"
REFUTED = "refuted"


# ---- minimum-acceleration boundary value problem ----

@dataclass(frozen=True)
class TakeoffBVP:
    """Reach velocity vT at xT, starting at rest from x0, within limits.

    g enters the feasibility side only: commanded vertical acceleration below
    -g would need the ground to pull.
    """

    x0: tuple[float, float, float]
    xT: tuple[float, float, float]
    vT: tuple[float, float, float]
    a_max: float
    g: float
    T_range: tuple[float, float] = DEFAULT_T_RANGE


@dataclass(frozen=True)
class TakeoffTrajectory:
    """Per-axis cubic x(t) = x0 + c2 t^2 + c3 t^3 (zero initial velocity).

    The cubic is the unique minimizer of the integrated squared acceleration
    under the four boundary conditions, so its acceleration is linear in time
    and peaks at an endpoint.
    """

    x0: tuple[float, float, float]
    c2: tuple[float, float, float]
    c3: tuple[float, float, float]
    T: float
    cost: float

    def position(self, t: float) -> tuple[float, float, float]:
        return tuple(self.x0[i] + self.c2[i] * t * t + self.c3[i] * t ** 3 for i in range(3))

    def velocity(self, t: float) -> tuple[float, float, float]:
        return tuple(2.0 * self.c2[i] * t + 3.0 * self.c3[i] * t * t for i in range(3))

    def acceleration(self, t: float) -> tuple[float, float, float]:
        return tuple(2.0 * self.c2[i] + 6.0 * self.c3[i] * t for i in range(3))

    @property
    def peak_accel(self) -> float:
        # |a(t)| is convex (a is linear in t), so the max sits at an endpoint
        a0 = self.acceleration(0.0)
        aT = self.acceleration(self.T)
        return max(math.sqrt(sum(c * c for c in a0)), math.sqrt(sum(c * c for c in aT)))

    def min_vertical_accel(self) -> float:
        az0 = 2.0 * self.c2[2]
        azT = 2.0 * self.c2[2] + 6.0 * self.c3[2] * self.T
        return min(az0, azT)


def min_accel_trajectory(x0, xT, vT, T: float) -> TakeoffTrajectory:
    """Analytic minimum-acceleration cubic for the rest-to-launch move."""
    if T <= 0.0:
        raise ValueError("duration must be positive")
    c2 = []
    c3 = []
    cost = 0.0
    for i in range(3):
        d = xT[i] - x0[i]
        v = vT[i]
        c2.append((3.0 * d - v * T) / (T * T))
        c3.append((v * T - 2.0 * d) / (T ** 3))
        cost += (12.0 * d * d - 12.0 * d * v * T + 4.0 * v * v * T * T) / (T ** 3)
    return TakeoffTrajectory(tuple(float(c) for c in x0), tuple(c2), tuple(c3),
                             float(T), cost)


def cost_gradient_T(x0, xT, vT, T: float) -> float:
    """d(cost)/dT of the analytic cubic, in closed form."""
    g = 0.0
    for i in range(3):
        d = xT[i] - x0[i]
        v = vT[i]
        g += -36.0 * d * d / T ** 4 + 24.0 * d * v / T ** 3 - 4.0 * v * v / T ** 2
    return g


def _trajectory_feasible(traj: TakeoffTrajectory, a_max: float, g: float) -> bool:
    if traj.peak_accel > a_max:
        return False
    return traj.min_vertical_accel() + g >= 0.0


def _penalized_cost(bvp: TakeoffBVP, T: float) -> float:
    traj = min_accel_trajectory(bvp.x0, bvp.xT, bvp.vT, T)
    if not _trajectory_feasible(traj, bvp.a_max, bvp.g):
        return math.inf
    return traj.cost


def _golden_section(bvp: TakeoffBVP, lo: float, hi: float, tol: float):
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = _penalized_cost(bvp, c), _penalized_cost(bvp, d)
    while (b - a) > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = _penalized_cost(bvp, c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = _penalized_cost(bvp, d)
        yield
    T = c if fc <= fd else d
    yield T


def _solve_stages(bvp: TakeoffBVP, tol: float):
    """Generator: yields between work units, returns the solution or None.

    Coarse grid scan brackets the feasible region (cost is not defined where
    the limits bind, so a bare golden section could stall on an infeasible
    probe), then golden-section refinement nails T to tolerance.
    """
    lo, hi = bvp.T_range
    if not lo < hi:
        return None
    best_i = -1
    best_cost = math.inf
    ts = [lo + (hi - lo) * i / (_GRID_POINTS - 1) for i in range(_GRID_POINTS)]
    for i, T in enumerate(ts):
        c = _penalized_cost(bvp, T)
        if c < best_cost:
            best_cost, best_i = c, i
        if i % 8 == 7:
            yield
    if best_i < 0 or math.isinf(best_cost):
        return None
    a = ts[max(0, best_i - 1)]
    b = ts[min(len(ts) - 1, best_i + 1)]
    T_best = ts[best_i]
    gen = _golden_section(bvp, a, b, tol)
    while True:
        try:
            step = next(gen)
        except StopIteration:
            break
        if step is None:
            yield
        else:
            if _penalized_cost(bvp, step) <= best_cost:
                T_best = step
            break
    traj = min_accel_trajectory(bvp.x0, bvp.xT, bvp.vT, T_best)
    if not _trajectory_feasible(traj, bvp.a_max, bvp.g):
        return None
    return traj


def solve_takeoff(bvp: TakeoffBVP, tol: float = DEFAULT_T_TOL) -> TakeoffTrajectory | None:
    """Best feasible take-off duration in T_range, or None if the limits
    cannot produce the launch velocity."""
    gen = _solve_stages(bvp, tol)
    while True:
        try:
            next(gen)
        except StopIteration as stop:
            return stop.value


# ---- confirmation jobs ----

class ConfirmationJob:
    """Incremental computation with a terminal confirmed/refuted verdict.

    Subclasses implement _work() as a generator that yields between work
    units and returns the boolean verdict.
    """

    def __init__(self, job_id: int, edge_id: int):
        self.job_id = job_id
        self.edge_id = edge_id
        self.state = RUNNING
        self.compute_ms = 0.0
        self.work_units = 0
        self._gen = None

    def _work(self):
        raise NotImplementedError
        yield  # pragma: no cover

    def step(self, budget_ms: float) -> str:
        """Run work units until the budget is spent or a verdict lands."""
        if self.state != RUNNING:
            return self.state
        if self._gen is None:
            self._gen = self._work()
        start = time.perf_counter()
        while True:
            try:
                next(self._gen)
            except StopIteration as stop:
                self.state = CONFIRMED if stop.value else REFUTED
                self.compute_ms += (time.perf_counter() - start) * 1000.0
                return self.state
            self.work_units += 1
            elapsed_ms = (time.perf_counter() - start) * 1000.0
            if elapsed_ms >= budget_ms:
                self.compute_ms += elapsed_ms
                return RUNNING


class JumpConfirmationJob(ConfirmationJob):
    """BVP feasibility plus a fine-step re-check of the flight arc."""

    def __init__(self, job_id: int, edge_id: int, bvp: TakeoffBVP, arc,
                 sweep_template, env, fine_step: float = FINE_SWEEP_STEP,
                 tol: float = DEFAULT_T_TOL):
        super().__init__(job_id, edge_id)
        self.bvp = bvp
        self.arc = arc
        self.sweep_template = sweep_template
        self.env = env
        self.fine_step = fine_step
        self.tol = tol

    def _work(self):
        gen = _solve_stages(self.bvp, self.tol)
        while True:
            try:
                yield next(gen)
            except StopIteration as stop:
                traj = stop.value
                break
        if traj is None:
            return False
        arr = self.env.obstacle_array
        if arr.shape[0] > 0:
            from . import kernels
            rows = self.arc.sample_rows(self.fine_step)
            t = self.sweep_template
            for lo in range(0, rows.shape[0], 64):
                chunk = rows[lo:lo + 64]
                if kernels.poses_sweep_hits_any(chunk, *t.center, *t.half_extents,
                                                t.yaw, arr):
                    return False
                yield
        return True


@dataclass(frozen=True)
class JobVerdict:
    job_id: int
    edge_id: int
    verdict: str  # confirmed | refuted
    compute_ms: float
    work_units: int


class ConfirmationQueue:
    """Round-robin scheduler for confirmation jobs.

    workers == 0: every inserted job runs to its verdict synchronously, so
    results are deterministic. workers >= 1: daemon threads repeatedly take
    the front job, run one time slice, and rotate it to the back, which keeps
    long jobs from starving short ones. Verdicts arrive on an ordered channel
    the planner drains between iterations.
    """

    def __init__(self, workers: int = 0, slice_ms: float = 5.0):
        self.workers = workers
        self.slice_ms = slice_ms
        self.channel: queue.Queue[JobVerdict] = queue.Queue()
        self._pending: deque[ConfirmationJob] = deque()
        self._cond = threading.Condition()
        self._stop = False
        self._threads: list[threading.Thread] = []
        self.jobs_inserted = 0

    def insert(self, job: ConfirmationJob):
        self.jobs_inserted += 1
        if self.workers == 0:
            while job.step(math.inf) == RUNNING:
                pass  # inf budget: one call reaches the verdict
            self.channel.put(JobVerdict(job.job_id, job.edge_id, job.state,
                                        0.0, job.work_units))
            return
        with self._cond:
            self._pending.append(job)
            self._cond.notify()

    def launch(self):
        if self.workers == 0 or self._threads:
            return
        for i in range(self.workers):
            t = threading.Thread(target=self._worker, name=f"confirm-{i}", daemon=True)
            t.start()
            self._threads.append(t)

    def shutdown(self):
        with self._cond:
            self._stop = True
            self._cond.notify_all()
        for t in self._threads:
            t.join(timeout=5.0)
        self._threads.clear()

    def drain(self) -> list[JobVerdict]:
        out = []
        while True:
            try:
                out.append(self.channel.get_nowait())
            except queue.Empty:
                return out

    def _worker(self):
        while True:
            with self._cond:
                while not self._pending and not self._stop:
                    self._cond.wait()
                if self._stop:
                    return
                job = self._pending.popleft()
            state = job.step(self.slice_ms)
            if state == RUNNING:
                with self._cond:
                    self._pending.append(job)
                    self._cond.notify()
            else:
                self.channel.put(JobVerdict(job.job_id, job.edge_id, state,
                                            job.compute_ms, job.work_units))
