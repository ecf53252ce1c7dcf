#!/usr/bin/env python3
"""Drive the bundled campus-lite scenario end to end in both viewing
modes, audit the run against the clearance policy, and (if matplotlib is
around) save a picture of the trajectory, the walls, and the pedestrians.

Run:  python demos/03_drive_campus_lite.py
"""

import numpy as np

from unwindsim import RunConfig, Scenario, data_path, run_scenario
from unwindsim.analysis import audit_run
from unwindsim.jsonio import load_json

scenario = Scenario.from_doc(load_json(data_path("campus_lite.json"), expect_format="scenario/1"))
config = RunConfig.from_doc(load_json(data_path("default_config.json"), expect_format="runconfig/1"))

print(f"scenario: {scenario.name}, grid {scenario.grid.width}x{scenario.grid.height} "
      f"at {scenario.grid.resolution} m/cell, {len(scenario.pedestrians)} pedestrians")
print(f"route: {scenario.route}")

logs = {}
for mode in ("UR", "CR"):
    log = run_scenario(scenario, config.with_mode(mode), mode)
    logs[mode] = log
    print(f"\n--- {mode} run ---")
    print(f"goal reached:    {log.goal_reached}")
    print(f"driven distance: {log.path_length:.2f} m")
    print(f"duration:        {log.duration:.2f} s")
    print(f"total rotation:  {log.total_rotation:.1f} deg")

# identical trajectories, different camera bookkeeping
same = all(
    (a.x, a.y, a.theta) == (b.x, b.y, b.theta)
    for a, b in zip(logs["UR"].steps, logs["CR"].steps)
)
print(f"\nUR and CR share the exact trajectory: {same}")
print("  (the modes differ only in the camera_frame_yaw column, which is")
print("   -theta under UR and 0 under CR)")

report = audit_run(logs["UR"], scenario)
print("\naudit against the clearance policy and kinematic limits:")
print(f"  min wall clearance:  {report.min_wall_clearance:.3f} m (policy {scenario.clearance_policy.min_wall})")
print(f"  min person distance: {report.min_person_distance:.3f} m (policy {scenario.clearance_policy.min_person})")
print(f"  max speed:           {report.max_speed:.3f} m/s (limit {scenario.limits.v_max})")
print(f"  max |omega|:         {report.max_abs_omega:.3f} rad/s (limit {scenario.limits.omega_max})")
print(f"  max |domega/dt|:     {report.max_abs_domega_dt:.3f} rad/s^2 (limit {scenario.limits.a_ang_max})")
print(f"  violations:          {len(report.violations)}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    from unwindsim.export import boundary_segments
    from unwindsim.world import pedestrian_position

    fig, ax = plt.subplots(figsize=(9, 6.5))
    for x0, y0, x1, y1 in boundary_segments(scenario.grid):
        ax.plot([x0, x1], [y0, y1], color="k", lw=1)
    log = logs["UR"]
    xs = [log.start[0]] + [s.x for s in log.steps]
    ys = [log.start[1]] + [s.y for s in log.steps]
    ax.plot(xs, ys, color="tab:blue", lw=1.5, label="robot")
    for p in scenario.pedestrians:
        track = [pedestrian_position(p, t) for t in np.arange(0.0, log.duration, 0.5)]
        track = [q for q in track if q is not None]
        ax.plot(*zip(*track), ls="--", lw=1, label=p.id)
    ax.plot(*scenario.robot_start[:2], "go", label="start")
    ax.plot(*scenario.route[-1], "r*", ms=12, label="goal")
    ax.set_aspect("equal")
    ax.legend(loc="center")
    ax.set_title("campus-lite: driven trajectory and pedestrian tracks")
    fig.savefig("campus_lite_run.png", dpi=130, bbox_inches="tight")
    print("\nsaved campus_lite_run.png")
except ImportError:
    print("\n(matplotlib not available; skipping the trajectory figure)")
