"""unwindsim: a deterministic, headless telepresence-robot simulator.

The package answers one question end to end: what does a remote user see
when a differential-drive robot carries their camera through a building,
and what changes when the camera frame counter-rotates so robot turns
never move their viewpoint (the unwound "UR" mode vs. the coupled "CR"
baseline)? Around that core live an any-angle planner, a dynamic-window
controller under the robot's kinematic limits, replayable run logs,
measurement routines, and the exact small-sample statistics used to
analyze user studies of such systems.
"""

from .analysis import (
    AuditReport,
    PointingSample,
    SSQResponse,
    SSQScore,
    audit_run,
    mean_head_deviation,
    path_integration_error,
    ssq_score,
)
from .config import RunConfig
from .controller import (
    ControlResult,
    KinematicLimits,
    RobotState,
    VelocityCommand,
    control_step,
    dynamic_window,
    integrate_unicycle,
    sample_window,
    score_candidate,
)
from .errors import UnwindSimError
from .export import build_viewer_bundle
from .geometry import (
    PlanarRotation,
    Rotation3,
    RotationSetDescriptor,
    Vec3,
    ViewMode,
    capability_check,
    embed_planar,
    rot2_from_angle,
    unwind_point,
    unwind_rotation,
    viewpoint_heading,
    wrap_angle,
)
from .planner import PathPolyline, line_of_sight, plan_route, plan_theta_star
from .simulator import (
    HeadTrace,
    ReplayLog,
    ReplayStep,
    ViewSample,
    apply_head_trace,
    replay_verify,
    run_scenario,
)
from .stats import (
    TestResult,
    clopper_pearson_ci,
    exact_binomial_test,
    mann_whitney_u,
    paired_t_test,
    wilcoxon_signed_rank,
)
from .world import (
    ClearancePolicy,
    OccupancyGrid,
    Pedestrian,
    Scenario,
    min_person_distance,
    min_wall_clearance,
    pedestrian_position,
)

__version__ = "0.1.0"


def data_path(name: str):
    """Path to a bundled data file (e.g. the campus-lite scenario)."""
    from importlib.resources import files

    return files("unwindsim.data").joinpath(name)
