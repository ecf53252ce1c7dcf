"""Dynamic-window local controller tracking a planned path.

Velocity candidates are sampled on a lattice inside the one-step dynamic
window, rolled out with the exact unicycle arc model, and scored by three
critics: distance to the path, arc-length progress along it, and capped
clearance (walls and pedestrians both). Candidates whose rollout violates
the scenario clearance policy are rejected outright, which is also how the
robot ends up evading pedestrians.

Scoring is vectorized across candidates; ``score_candidate`` runs the same
kernel on a batch of one, so the sequential argmax and the batched
``control_step`` agree bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import Stuck, UnwindSimError
from .geometry import wrap_angle
from .planner import PathPolyline
from .world import Scenario, pedestrian_positions_over


@dataclass(frozen=True)
class KinematicLimits:
    """Paper-grade defaults: 1 m/s top speed, |omega| <= 1 rad/s,
    3.2 rad/s^2 rotational acceleration. No reverse (v_min = 0)."""

    v_max: float = 1.0
    v_min: float = 0.0
    omega_max: float = 1.0
    omega_min: float = -1.0
    a_lin_max: float = 1.0
    a_ang_max: float = 3.2

    def __post_init__(self):
        if min(self.v_max, self.omega_max, self.a_lin_max, self.a_ang_max) <= 0:
            raise UnwindSimError("kinematic limits must be positive")

    def to_doc(self) -> dict:
        return {
            "v_max": self.v_max,
            "v_min": self.v_min,
            "omega_max": self.omega_max,
            "omega_min": self.omega_min,
            "a_lin_max": self.a_lin_max,
            "a_ang_max": self.a_ang_max,
        }

    @staticmethod
    def from_doc(doc: dict) -> "KinematicLimits":
        return KinematicLimits(**doc)


@dataclass(frozen=True)
class RobotState:
    x: float
    y: float
    theta: float
    v: float = 0.0
    omega: float = 0.0
    t: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "theta", wrap_angle(self.theta))


@dataclass(frozen=True)
class VelocityCommand:
    v: float
    omega: float


def dynamic_window(state: RobotState, limits: KinematicLimits, dt: float):
    """Velocity box reachable within one control step: (v_lo, v_hi, w_lo, w_hi)."""
    if dt <= 0:
        raise UnwindSimError("dt must be positive")
    v_lo = max(limits.v_min, state.v - limits.a_lin_max * dt)
    v_hi = min(limits.v_max, state.v + limits.a_lin_max * dt)
    w_lo = max(limits.omega_min, state.omega - limits.a_ang_max * dt)
    w_hi = min(limits.omega_max, state.omega + limits.a_ang_max * dt)
    return (v_lo, v_hi, w_lo, w_hi)


def sample_window(window, n_v: int, n_w: int):
    """Uniform inclusive lattice over the window, v-major then omega."""
    if n_v < 1 or n_w < 1:
        raise UnwindSimError("sample counts must be >= 1")
    v_lo, v_hi, w_lo, w_hi = window

    def axis(lo, hi, n):
        if n == 1:
            return [0.5 * (lo + hi)]
        return list(np.linspace(lo, hi, n))

    return [
        VelocityCommand(float(v), float(w))
        for v in axis(v_lo, v_hi, n_v)
        for w in axis(w_lo, w_hi, n_w)
    ]


def integrate_unicycle(state: RobotState, cmd: VelocityCommand, dt: float) -> RobotState:
    """Exact unicycle step: straight line for |omega| ~ 0, circular arc
    otherwise. Arc length traveled is always |v|*dt."""
    if dt <= 0:
        raise UnwindSimError("dt must be positive")
    v, w = cmd.v, cmd.omega
    th = state.theta
    if abs(w) < 1e-9:
        x = state.x + v * math.cos(th) * dt
        y = state.y + v * math.sin(th) * dt
        th_new = th + w * dt
    else:
        th_new = th + w * dt
        r = v / w
        x = state.x + r * (math.sin(th_new) - math.sin(th))
        y = state.y - r * (math.cos(th_new) - math.cos(th))
    return RobotState(x=x, y=y, theta=wrap_angle(th_new), v=v, omega=w, t=state.t + dt)


def project_points_to_path(points: np.ndarray, path: PathPolyline):
    """For each point: (distance to polyline, arc length of closest point,
    tangent angle of the segment it lands on).

    Ties across segments resolve to the first (lowest-index) segment so the
    result is deterministic.
    """
    pts, cum = path.as_arrays()
    q = np.atleast_2d(np.asarray(points, dtype=float))
    if len(pts) == 1:
        d = np.hypot(q[:, 0] - pts[0, 0], q[:, 1] - pts[0, 1])
        return d, np.zeros(len(q)), np.zeros(len(q))
    a = pts[:-1]  # (s, 2)
    d_seg = pts[1:] - a
    len2 = np.sum(d_seg * d_seg, axis=1)
    safe_len2 = np.where(len2 > 0.0, len2, 1.0)
    # (m, s) projection parameter per point/segment pair
    rel = q[:, None, :] - a[None, :, :]
    tproj = np.einsum("msk,sk->ms", rel, d_seg) / safe_len2[None, :]
    np.clip(tproj, 0.0, 1.0, out=tproj)
    tproj = np.where(len2[None, :] > 0.0, tproj, 0.0)
    closest = a[None, :, :] + tproj[:, :, None] * d_seg[None, :, :]
    diff = q[:, None, :] - closest
    dist2 = np.sum(diff * diff, axis=2)
    k = np.argmin(dist2, axis=1)
    rows = np.arange(len(q))
    seg_len = np.sqrt(len2)
    s = cum[k] + tproj[rows, k] * seg_len[k]
    tangent = np.arctan2(d_seg[k, 1], d_seg[k, 0])
    return np.sqrt(dist2[rows, k]), s, tangent


def point_at_arclength(path: PathPolyline, s: np.ndarray) -> np.ndarray:
    """Points on the path at the given arc lengths (clamped to its ends)."""
    pts, cum = path.as_arrays()
    s = np.clip(np.asarray(s, dtype=float), 0.0, cum[-1])
    if len(pts) < 2:
        return np.repeat(pts[:1], len(s), axis=0)
    idx = np.searchsorted(cum, s, side="right") - 1
    idx = np.clip(idx, 0, len(pts) - 2)
    seg = pts[idx + 1] - pts[idx]
    seg_len = cum[idx + 1] - cum[idx]
    u = np.where(seg_len > 0.0, (s - cum[idx]) / np.where(seg_len > 0.0, seg_len, 1.0), 0.0)
    return pts[idx] + u[:, None] * seg

def lookahead_direction(path: PathPolyline, s: np.ndarray, lookahead: float) -> np.ndarray:
    """Angle of the chord from the path point at s to the point at
    s + lookahead. Rotates continuously through corners, unlike the raw
    segment tangent, so the heading critic has no cliff to get caught on.
    """
    pts, cum = path.as_arrays()
    s = np.asarray(s, dtype=float)
    if len(pts) < 2:
        return np.zeros(s.shape)
    p0 = point_at_arclength(path, s)
    p1 = point_at_arclength(path, s + lookahead)
    chord = p1 - p0
    degenerate = np.hypot(chord[:, 0], chord[:, 1]) < 1e-9
    if degenerate.any():
        # At the very end of the path fall back to the final segment.
        tail = pts[-1] - pts[-2]
        chord[degenerate] = tail
    return np.arctan2(chord[:, 1], chord[:, 0])


def _rollout_positions(state: RobotState, v: np.ndarray, w: np.ndarray, dt: float, n_sub: int):
    """Exact-arc rollout for all candidates at once, closed form in the
    substep index (the arc model telescopes).

    Returns xs, ys with shape (n_candidates, n_sub): positions after each
    of the n_sub control steps.
    """
    steps = np.arange(1, n_sub + 1) * dt
    th0 = state.theta
    th = th0 + w[:, None] * steps[None, :]
    straight = np.abs(w) < 1e-9
    r = np.where(straight, 0.0, v / np.where(straight, 1.0, w))
    arc_x = state.x + r[:, None] * (np.sin(th) - math.sin(th0))
    arc_y = state.y - r[:, None] * (np.cos(th) - math.cos(th0))
    line_x = state.x + (v * math.cos(th0))[:, None] * steps[None, :]
    line_y = state.y + (v * math.sin(th0))[:, None] * steps[None, :]
    xs = np.where(straight[:, None], line_x, arc_x)
    ys = np.where(straight[:, None], line_y, arc_y)
    return xs, ys


def _person_tracks(scenario: Scenario, t0: float, dt: float, n_sub: int):
    """Per-pedestrian (present mask, positions) over the rollout substeps."""
    times = t0 + np.arange(1, n_sub + 1) * dt
    return [pedestrian_positions_over(p, times) for p in scenario.pedestrians]


def _score_batch(
    v: np.ndarray,
    w: np.ndarray,
    state: RobotState,
    path: PathPolyline,
    scenario: Scenario,
    config,
    t0: float,
    horizon: float,
    person_tracks=None,
):
    """Scores and rejection flags for a batch of candidates.

    Critics: w_path * (-cross-track of rollout endpoint)
           + w_prog * (arc-length progress of rollout endpoint)
           + w_clear * min(worst clearance along rollout, clearance_cap)
           + w_head * cos(final heading - lookahead path direction)
           + w_goal * ramp * max(0, goal_zone - endpoint distance to goal).
    Rejected when any rollout point leaves the map, violates the wall
    policy, or comes closer to a pedestrian than the person policy.

    The heading critic is what lets the robot rotate out of a standstill
    at a sharp corner: the positional critics alone are identical for
    every in-place rotation, and the |omega| tie-break would then pin the
    robot in place forever. The goal critic (ramped in over the last
    stretch of the path, so a route that ends near its start cannot pull
    the robot backward at launch) gives the final approach the lateral
    precision that pure path tracking lacks.
    """
    dt = config.dt
    n_sub = max(1, int(round(horizon / dt)))
    n = len(v)
    grid = scenario.grid
    policy = scenario.clearance_policy
    cap = config.clearance_cap

    xs, ys = _rollout_positions(state, v, w, dt, n_sub)
    flat = np.column_stack([xs.ravel(), ys.ravel()])

    x0b, y0b, x1b, y1b = grid.world_bounds()
    in_bounds = (
        (flat[:, 0] >= x0b) & (flat[:, 0] <= x1b) & (flat[:, 1] >= y0b) & (flat[:, 1] <= y1b)
    )

    # Exact wall clearance only where the cheap lower bound cannot already
    # certify "above both the policy and the cap" (identical final scores,
    # far fewer KD-tree refinements).
    wall = np.full(len(flat), cap, dtype=float)
    need = max(policy.min_wall, cap)
    if in_bounds.any():
        lb = np.full(len(flat), -math.inf)
        lb[in_bounds] = grid.wall_clearance_lower_bound(flat[in_bounds])
        refine = in_bounds & (lb < need)
        if refine.any():
            wall[refine] = grid.wall_clearance_batch(flat[refine])
    wall_m = wall.reshape(n, n_sub)

    if person_tracks is None:
        person_tracks = _person_tracks(scenario, t0, dt, n_sub)
    person_m = np.full((n, n_sub), math.inf)
    for present, ppos in person_tracks:
        if not present.any():
            continue
        d = np.hypot(xs - ppos[None, :, 0], ys - ppos[None, :, 1])
        d[:, ~present] = math.inf
        np.minimum(person_m, d, out=person_m)

    oob = ~in_bounds.reshape(n, n_sub)
    rejected = (
        oob.any(axis=1)
        | (wall_m < policy.min_wall).any(axis=1)
        | (person_m < policy.min_person).any(axis=1)
    )

    clearance = np.minimum(wall_m, person_m).min(axis=1)
    clearance = np.minimum(clearance, cap)

    endpoint = np.column_stack([xs[:, -1], ys[:, -1]])
    cross_track, progress, _ = project_points_to_path(endpoint, path)
    # Align the final heading with where the path is about to go, so an
    # upcoming corner starts pulling the heading early.
    tangent = lookahead_direction(path, progress, config.head_lookahead)
    theta_end = state.theta + w * (n_sub * dt)
    heading = np.cos(theta_end - tangent)

    gx, gy = path.vertices[-1]
    goal_dist = np.hypot(endpoint[:, 0] - gx, endpoint[:, 1] - gy)
    zone = config.goal_zone
    ramp = np.clip((progress - (path.length - zone)) / zone, 0.0, 1.0)
    goal_term = ramp * np.maximum(0.0, zone - goal_dist)

    scores = (
        config.w_path * (-cross_track)
        + config.w_prog * progress
        + config.w_clear * clearance
        + config.w_head * heading
        + config.w_goal * goal_term
    )
    return scores, rejected


def score_candidate(
    cmd: VelocityCommand,
    state: RobotState,
    path: PathPolyline,
    scenario: Scenario,
    config,
    t: float | None = None,
    horizon: float | None = None,
):
    """Score one candidate; None if its rollout is rejected."""
    t0 = state.t if t is None else t
    h = config.horizon if horizon is None else horizon
    scores, rejected = _score_batch(
        np.array([cmd.v]), np.array([cmd.omega]), state, path, scenario, config, t0, h
    )
    if rejected[0]:
        return None
    return float(scores[0])


@dataclass(frozen=True)
class ControlResult:
    cmd: VelocityCommand
    goal_reached: bool


def control_step(
    state: RobotState, path: PathPolyline, scenario: Scenario, config
) -> ControlResult:
    """Pick the best admissible command from the sampled dynamic window.

    Ties break toward lower |omega|, then lower v, then sample order.
    Emits (0, 0) with the goal flag once within the goal tolerance; raises
    Stuck when every candidate is rejected.
    """
    gx, gy = path.vertices[-1]
    if math.hypot(state.x - gx, state.y - gy) <= config.goal_tolerance:
        # A looping route can pass through the goal's neighborhood early;
        # only count it once the projection is near the end of the path.
        _, s_here, _ = project_points_to_path(
            np.array([[state.x, state.y]]), path
        )
        if s_here[0] >= path.length - config.goal_zone:
            return ControlResult(VelocityCommand(0.0, 0.0), True)

    window = dynamic_window(state, scenario.limits, config.dt)
    samples = sample_window(window, config.n_v, config.n_w)
    v = np.array([c.v for c in samples])
    w = np.array([c.omega for c in samples])
    person_tracks = _person_tracks(
        scenario, state.t, config.dt, max(1, int(round(config.horizon / config.dt)))
    )
    scores, rejected = _score_batch(
        v, w, state, path, scenario, config, state.t, config.horizon, person_tracks
    )

    best = None
    best_score = -math.inf
    for i, cmd in enumerate(samples):
        if rejected[i]:
            continue
        s = float(scores[i])
        if best is None or s > best_score:
            best, best_score = cmd, s
        elif s == best_score and (abs(cmd.omega), cmd.v) < (abs(best.omega), best.v):
            best = cmd
    if best is None:
        raise Stuck(f"all {len(samples)} candidates rejected at t={state.t:.2f}")
    return ControlResult(best, False)
