"""Quantitative measures over replay logs and questionnaire responses:
pointing-based path-integration error, mean head deviation from the robot
heading, weighted simulator-sickness scores, and run audits against the
scenario's clearance policy and kinematic limits.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateGeometry,
    DegeneratePointing,
    InvalidSeverity,
    SeriesMismatch,
    UnwindSimError,
)
from .geometry import Vec3, wrap_angle
from .simulator import ReplayLog
from .world import Scenario

AUDIT_FORMAT = "audit/1"

# Pointing rays within 5 degrees of vertical have no usable floor direction.
MIN_ELEVATION_FROM_VERTICAL_DEG = 5.0


@dataclass(frozen=True)
class PointingSample:
    """A controller ray: where it starts and the unit direction it points."""

    origin_of_ray: tuple  # (x, y, z)
    direction: Vec3

    def __post_init__(self):
        d = self.direction
        norm = math.sqrt(d.x * d.x + d.y * d.y + d.z * d.z)
        if abs(norm - 1.0) > 1e-9:
            raise UnwindSimError(f"pointing direction must be unit length, |d|={norm}")


def path_integration_error(pointing: PointingSample, final_position, origin) -> float:
    """Absolute angle in degrees between the indicated direction (projected
    to the floor plane) and the true direction home; always in [0, 180]."""
    fx, fy = float(final_position[0]), float(final_position[1])
    ox, oy = float(origin[0]), float(origin[1])
    hx, hy = ox - fx, oy - fy
    if math.hypot(hx, hy) < 1e-12:
        raise DegenerateGeometry("final position equals origin; home direction undefined")
    d = pointing.direction
    horiz = math.hypot(d.x, d.y)
    if horiz < math.sin(math.radians(MIN_ELEVATION_FROM_VERTICAL_DEG)):
        raise DegeneratePointing("ray is within 5 degrees of vertical; projection unstable")
    err = wrap_angle(math.atan2(d.y, d.x) - math.atan2(hy, hx))
    return abs(math.degrees(err))


def mean_head_deviation(robot_yaw_series, head_yaw_series) -> float:
    """Mean absolute planar angle between robot heading and head yaw, deg."""
    r = np.asarray(robot_yaw_series, dtype=float)
    h = np.asarray(head_yaw_series, dtype=float)
    if r.shape != h.shape:
        raise SeriesMismatch(f"series lengths differ: {r.shape} vs {h.shape}")
    if r.size == 0:
        raise SeriesMismatch("series are empty")
    diffs = [abs(wrap_angle(a - b)) for a, b in zip(r, h)]
    return math.degrees(sum(diffs) / len(diffs))


# --- simulator sickness questionnaire -------------------------------------

SSQ_SYMPTOMS = (
    "general discomfort",
    "fatigue",
    "headache",
    "eye strain",
    "difficulty focusing",
    "increased salivation",
    "sweating",
    "nausea",
    "difficulty concentrating",
    "fullness of head",
    "blurred vision",
    "dizziness eyes open",
    "dizziness eyes closed",
    "vertigo",
    "stomach awareness",
    "burping",
)

# Subscale loadings (0-based symptom indices), transcribed from the
# published scoring table: seven items each, with five symptoms loading
# on two subscales.
NAUSEA_ITEMS = (0, 5, 6, 7, 8, 14, 15)
OCULOMOTOR_ITEMS = (0, 1, 2, 3, 4, 8, 10)
DISORIENTATION_ITEMS = (4, 7, 9, 10, 11, 12, 13)

NAUSEA_WEIGHT = 9.54
OCULOMOTOR_WEIGHT = 7.58
DISORIENTATION_WEIGHT = 13.92
TOTAL_WEIGHT = 3.74

# Guard against accidental edits of the loading table.
_LOADING_CHECKSUM = "da5a8b5fad8cc1ec07170d8fc87c3a94d7e71aec69632d09aee06fe62dd60655"


def _loading_checksum() -> str:
    blob = json.dumps(
        {
            "symptoms": SSQ_SYMPTOMS,
            "nausea": NAUSEA_ITEMS,
            "oculomotor": OCULOMOTOR_ITEMS,
            "disorientation": DISORIENTATION_ITEMS,
            "weights": [NAUSEA_WEIGHT, OCULOMOTOR_WEIGHT, DISORIENTATION_WEIGHT, TOTAL_WEIGHT],
        },
        sort_keys=True,
    )
    return hashlib.sha256(blob.encode()).hexdigest()


def verify_loading_table() -> None:
    got = _loading_checksum()
    if got != _LOADING_CHECKSUM:
        raise UnwindSimError(f"SSQ loading table was modified (checksum {got})")


@dataclass(frozen=True)
class SSQResponse:
    """Sixteen symptom severities, each 0 (none) to 3 (severe)."""

    severities: tuple

    def __post_init__(self):
        sev = tuple(self.severities)
        if len(sev) != len(SSQ_SYMPTOMS):
            raise InvalidSeverity(f"expected {len(SSQ_SYMPTOMS)} items, got {len(sev)}")
        for s in sev:
            if not isinstance(s, int) or s not in (0, 1, 2, 3):
                raise InvalidSeverity(f"severity {s!r} not in {{0,1,2,3}}")
        object.__setattr__(self, "severities", sev)


@dataclass(frozen=True)
class SSQScore:
    nausea: float
    oculomotor: float
    disorientation: float
    total: float


def ssq_score(r: SSQResponse) -> SSQScore:
    """Weighted subscale and total scores (all-severe response totals 235.62)."""
    sev = r.severities
    n_raw = sum(sev[i] for i in NAUSEA_ITEMS)
    o_raw = sum(sev[i] for i in OCULOMOTOR_ITEMS)
    d_raw = sum(sev[i] for i in DISORIENTATION_ITEMS)
    return SSQScore(
        nausea=n_raw * NAUSEA_WEIGHT,
        oculomotor=o_raw * OCULOMOTOR_WEIGHT,
        disorientation=d_raw * DISORIENTATION_WEIGHT,
        total=(n_raw + o_raw + d_raw) * TOTAL_WEIGHT,
    )


def load_ssq_csv(path) -> list:
    """Read responses from a CSV with one header row of the canonical
    symptom names and 16 integer columns per row."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise UnwindSimError("SSQ CSV is empty")
        names = tuple(h.strip().lower() for h in header)
        if names != SSQ_SYMPTOMS:
            raise UnwindSimError(
                f"SSQ CSV header must be the canonical symptom names; got {names}"
            )
        responses = []
        for row in reader:
            if not row or all(not c.strip() for c in row):
                continue
            responses.append(SSQResponse(tuple(int(c) for c in row)))
    return responses


# --- run audit -------------------------------------------------------------


@dataclass
class AuditReport:
    min_wall_clearance: float = math.inf
    min_person_distance: float = math.inf
    max_speed: float = 0.0
    max_abs_omega: float = 0.0
    max_abs_domega_dt: float = 0.0
    total_rotation: float = 0.0
    path_length: float = 0.0
    duration: float = 0.0
    goal_reached: bool = False
    violations: list = field(default_factory=list)
    mean_head_deviation: float | None = None

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_doc(self) -> dict:
        from .jsonio import inf_to_null

        return {
            "format": AUDIT_FORMAT,
            "min_wall_clearance": inf_to_null(self.min_wall_clearance),
            "min_person_distance": inf_to_null(self.min_person_distance),
            "max_speed": self.max_speed,
            "max_abs_omega": self.max_abs_omega,
            "max_abs_domega_dt": self.max_abs_domega_dt,
            "total_rotation": self.total_rotation,
            "path_length": self.path_length,
            "duration": self.duration,
            "goal_reached": self.goal_reached,
            "violations": self.violations,
            "mean_head_deviation": self.mean_head_deviation,
        }


def audit_run(log: ReplayLog, scenario: Scenario) -> AuditReport:
    """Summarize a replay and flag clearance-policy and limit violations."""
    report = AuditReport(
        total_rotation=log.total_rotation,
        path_length=log.path_length,
        duration=log.duration,
        goal_reached=log.goal_reached,
    )
    if not log.steps:
        return report

    policy = scenario.clearance_policy
    limits = scenario.limits
    tol = 1e-9
    prev_omega = 0.0
    for i, s in enumerate(log.steps):
        report.min_wall_clearance = min(report.min_wall_clearance, s.min_wall_clearance)
        report.min_person_distance = min(report.min_person_distance, s.min_person_distance)
        report.max_speed = max(report.max_speed, abs(s.v))
        report.max_abs_omega = max(report.max_abs_omega, abs(s.omega))
        alpha = abs(s.omega - prev_omega) / log.dt
        report.max_abs_domega_dt = max(report.max_abs_domega_dt, alpha)
        prev_omega = s.omega
        if s.min_wall_clearance < policy.min_wall - tol:
            report.violations.append(
                {"kind": "wall", "step": i, "value": s.min_wall_clearance}
            )
        if s.min_person_distance < policy.min_person - tol:
            report.violations.append(
                {"kind": "person", "step": i, "value": s.min_person_distance}
            )
        if abs(s.v) > limits.v_max + tol:
            report.violations.append({"kind": "speed", "step": i, "value": s.v})
        if abs(s.omega) > limits.omega_max + tol:
            report.violations.append({"kind": "omega", "step": i, "value": s.omega})
        if alpha > limits.a_ang_max + tol:
            report.violations.append({"kind": "alpha", "step": i, "value": alpha})
    return report
