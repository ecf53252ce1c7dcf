"""Deterministic time-stepped runs producing byte-exact replay logs.

A run plans once with Theta*, then alternates ``control_step`` and exact
unicycle integration at a fixed dt, recording pose, command, the
camera-frame yaw for the selected viewing mode, and both clearances at
every step. Identical inputs produce identical bytes, which is what makes
golden-log testing and ``replay_verify`` possible.

Camera-frame bookkeeping is the whole point: in UR mode the camera frame
carries yaw -theta so the user's world-frame viewpoint never moves when
the robot turns; in CR mode it stays at 0 and the viewpoint turns with
the robot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import RunConfig
from .controller import RobotState, control_step, integrate_unicycle
from .errors import NoPath, Stuck, TraceTooShort, UnwindSimError
from .geometry import PlanarRotation, ViewMode, viewpoint_heading, wrap_angle
from .jsonio import check_format, doc_hash, inf_to_null, null_to_inf
from .planner import plan_route
from .world import Scenario, min_person_distance, min_wall_clearance

REPLAY_FORMAT = "replay/1"
HEADTRACE_FORMAT = "headtrace/1"


@dataclass(frozen=True)
class ReplayStep:
    t: float
    x: float
    y: float
    theta: float
    v: float
    omega: float
    camera_frame_yaw: float
    min_wall_clearance: float
    min_person_distance: float

    def to_doc(self) -> dict:
        return {
            "t": self.t,
            "x": self.x,
            "y": self.y,
            "theta": self.theta,
            "v": self.v,
            "omega": self.omega,
            "camera_frame_yaw": self.camera_frame_yaw,
            "min_wall_clearance": inf_to_null(self.min_wall_clearance),
            "min_person_distance": inf_to_null(self.min_person_distance),
        }

    @staticmethod
    def from_doc(d: dict) -> "ReplayStep":
        return ReplayStep(
            t=d["t"],
            x=d["x"],
            y=d["y"],
            theta=d["theta"],
            v=d["v"],
            omega=d["omega"],
            camera_frame_yaw=d["camera_frame_yaw"],
            min_wall_clearance=null_to_inf(d["min_wall_clearance"]),
            min_person_distance=null_to_inf(d["min_person_distance"]),
        )


@dataclass
class ReplayLog:
    scenario_hash: str
    config_hash: str
    dt: float
    mode: str
    seed: int
    start: tuple  # (x, y, theta)
    steps: list = field(default_factory=list)
    path_length: float = 0.0
    duration: float = 0.0
    total_rotation: float = 0.0
    goal_reached: bool = False
    error: dict | None = None

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.steps])

    @property
    def thetas(self) -> np.ndarray:
        return np.array([s.theta for s in self.steps])

    def to_doc(self) -> dict:
        return {
            "format": REPLAY_FORMAT,
            "header": {
                "scenario_hash": self.scenario_hash,
                "config_hash": self.config_hash,
                "dt": self.dt,
                "mode": self.mode,
                "seed": self.seed,
                "start": {"x": self.start[0], "y": self.start[1], "theta": self.start[2]},
            },
            "steps": [s.to_doc() for s in self.steps],
            "footer": {
                "path_length": self.path_length,
                "duration": self.duration,
                "total_rotation": self.total_rotation,
                "goal_reached": self.goal_reached,
                "error": self.error,
            },
        }

    @staticmethod
    def from_doc(doc: dict) -> "ReplayLog":
        check_format(doc, REPLAY_FORMAT)
        h, f = doc["header"], doc["footer"]
        return ReplayLog(
            scenario_hash=h["scenario_hash"],
            config_hash=h["config_hash"],
            dt=h["dt"],
            mode=h["mode"],
            seed=h["seed"],
            start=(h["start"]["x"], h["start"]["y"], h["start"]["theta"]),
            steps=[ReplayStep.from_doc(s) for s in doc["steps"]],
            path_length=f["path_length"],
            duration=f["duration"],
            total_rotation=f["total_rotation"],
            goal_reached=f["goal_reached"],
            error=f["error"],
        )


def camera_frame_yaw_for(theta: float, mode: ViewMode) -> float:
    """UR counter-rotates the camera frame by the robot yaw; CR leaves it."""
    return -theta if mode is ViewMode.UR else 0.0


def run_scenario(scenario: Scenario, config: RunConfig, mode: str | ViewMode) -> ReplayLog:
    """Plan once, then drive the controller to the end of the route.

    NoPath, Stuck, and Timeout do not raise; they are recorded in the log
    footer with the step index so the log is still a complete record.
    """
    vmode = ViewMode(mode) if not isinstance(mode, ViewMode) else mode
    scenario_hash = doc_hash(scenario.to_doc())
    config_hash = doc_hash(config.to_doc())
    x0, y0, th0 = scenario.robot_start
    log = ReplayLog(
        scenario_hash=scenario_hash,
        config_hash=config_hash,
        dt=config.dt,
        mode=vmode.value,
        seed=config.seed,
        start=(x0, y0, wrap_angle(th0)),
    )

    try:
        path = plan_route(scenario.grid, (x0, y0), scenario.route)
    except NoPath:
        log.error = {"kind": "NoPath", "step": 0}
        return log

    state = RobotState(x=x0, y=y0, theta=th0, v=0.0, omega=0.0, t=0.0)
    prev_x, prev_y, prev_th = state.x, state.y, state.theta
    path_length = 0.0
    total_rot = 0.0

    while True:
        try:
            res = control_step(state, path, scenario, config)
        except Stuck:
            log.error = {"kind": "Stuck", "step": len(log.steps)}
            break
        if res.goal_reached:
            log.goal_reached = True
            break
        if state.t >= config.timeout:
            log.error = {"kind": "Timeout", "step": len(log.steps)}
            break
        state = integrate_unicycle(state, res.cmd, config.dt)
        path_length += math.hypot(state.x - prev_x, state.y - prev_y)
        total_rot += abs(wrap_angle(state.theta - prev_th))
        prev_x, prev_y, prev_th = state.x, state.y, state.theta
        log.steps.append(
            ReplayStep(
                t=state.t,
                x=state.x,
                y=state.y,
                theta=state.theta,
                v=state.v,
                omega=state.omega,
                camera_frame_yaw=camera_frame_yaw_for(state.theta, vmode),
                min_wall_clearance=min_wall_clearance((state.x, state.y), scenario.grid),
                min_person_distance=min_person_distance((state.x, state.y), scenario, state.t),
            )
        )

    log.path_length = path_length
    log.duration = len(log.steps) * config.dt
    log.total_rotation = math.degrees(total_rot)
    return log


@dataclass(frozen=True)
class HeadTrace:
    """Synthetic head-yaw trajectory.

    kinds: "still" (constant yaw), "follow_heading" (first-order lag toward
    the robot heading while in UR; the CR user has no reason to turn, so the
    trace stays at 0 there), "sinusoid", and "scripted" (piecewise-linear
    samples).
    """

    kind: str
    yaw: float = 0.0
    lag_tau: float = 0.7
    amplitude: float = 0.0
    period: float = 1.0
    samples: tuple = ()

    @staticmethod
    def still(yaw: float = 0.0) -> "HeadTrace":
        return HeadTrace(kind="still", yaw=yaw)

    @staticmethod
    def follow_heading(lag_tau: float = 0.7) -> "HeadTrace":
        if lag_tau <= 0:
            raise UnwindSimError("lag_tau must be positive")
        return HeadTrace(kind="follow_heading", lag_tau=lag_tau)

    @staticmethod
    def sinusoid(amplitude: float, period: float) -> "HeadTrace":
        if period <= 0:
            raise UnwindSimError("period must be positive")
        return HeadTrace(kind="sinusoid", amplitude=amplitude, period=period)

    @staticmethod
    def scripted(samples) -> "HeadTrace":
        pts = tuple((float(t), float(y)) for t, y in samples)
        if not pts:
            raise UnwindSimError("scripted trace needs at least one sample")
        ts = [t for t, _ in pts]
        if any(b < a for a, b in zip(ts, ts[1:])):
            raise UnwindSimError("scripted samples must be monotone in t")
        return HeadTrace(kind="scripted", samples=pts)

    def yaw_series(self, log: ReplayLog, mode: ViewMode) -> np.ndarray:
        """Head yaw at every log step (same length as log.steps)."""
        times = log.times
        thetas = log.thetas
        if self.kind == "still":
            return np.full(len(times), self.yaw)
        if self.kind == "sinusoid":
            return self.amplitude * np.sin(2.0 * math.pi * times / self.period)
        if self.kind == "scripted":
            if len(times) and self.samples[-1][0] < times[-1] - 1e-9:
                raise TraceTooShort(
                    f"trace ends at {self.samples[-1][0]}s, log runs to {times[-1]}s"
                )
            st = np.array([t for t, _ in self.samples])
            sy = np.array([y for _, y in self.samples])
            return np.interp(times, st, sy)
        if self.kind == "follow_heading":
            if mode is ViewMode.CR:
                return np.zeros(len(times))
            gain = 1.0 - math.exp(-log.dt / self.lag_tau)
            yaw = log.start[2]
            out = np.empty(len(times))
            for k in range(len(times)):
                yaw = yaw + gain * wrap_angle(thetas[k] - yaw)
                out[k] = yaw
            return out
        raise UnwindSimError(f"unknown head trace kind {self.kind!r}")


@dataclass(frozen=True)
class ViewSample:
    t: float
    world_view_yaw: float
    mode: str


def apply_head_trace(log: ReplayLog, head: HeadTrace, mode: str | ViewMode):
    """World-frame viewpoint yaw per step for a head trace over a replay."""
    vmode = ViewMode(mode) if not isinstance(mode, ViewMode) else mode
    yaws = head.yaw_series(log, vmode)
    samples = []
    for step, hy in zip(log.steps, yaws):
        view = viewpoint_heading(
            PlanarRotation(step.theta), PlanarRotation(float(hy)), vmode
        )
        samples.append(ViewSample(t=step.t, world_view_yaw=view.angle, mode=vmode.value))
    return samples


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    detail: str = ""

    def __bool__(self):
        return self.ok


def replay_verify(log: ReplayLog, scenario: Scenario, config: RunConfig) -> VerifyResult:
    """Re-run the simulation and compare byte-wise against the log."""
    if log.scenario_hash != doc_hash(scenario.to_doc()):
        return VerifyResult(False, "scenario hash mismatch; wrong scenario for this log")
    if log.config_hash != doc_hash(config.to_doc()):
        return VerifyResult(False, "config hash mismatch; wrong config for this log")
    fresh = run_scenario(scenario, config, log.mode)
    from .jsonio import canonical_dumps

    if canonical_dumps(fresh.to_doc()) == canonical_dumps(log.to_doc()):
        return VerifyResult(True, "")
    for i, (a, b) in enumerate(zip(log.steps, fresh.steps)):
        if a != b:
            return VerifyResult(False, f"first divergent step: {i} (t={a.t})")
    if len(log.steps) != len(fresh.steps):
        return VerifyResult(
            False, f"step count differs: log={len(log.steps)} fresh={len(fresh.steps)}"
        )
    return VerifyResult(False, "headers or footer differ")


def headtrace_to_doc(samples) -> dict:
    """Serialize recorded head-yaw samples (t, yaw) as headtrace/1."""
    return {
        "format": HEADTRACE_FORMAT,
        "samples": [[t, y] for t, y in samples],
    }


def headtrace_from_doc(doc: dict) -> HeadTrace:
    check_format(doc, HEADTRACE_FORMAT)
    return HeadTrace.scripted([(t, y) for t, y in doc["samples"]])
