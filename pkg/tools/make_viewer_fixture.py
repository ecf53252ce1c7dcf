#!/usr/bin/env python3
"""Generate the viewer test fixture: a small replay bundle, a scripted
ghost head trace, and the core-computed world-frame view yaws that the
TypeScript camera math must reproduce within 0.5 degrees.

Rerun after simulator changes and commit the regenerated JSON:
    python tools/make_viewer_fixture.py
"""

import json
import math
import pathlib
import sys

import numpy as np

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from unwindsim.config import RunConfig
from unwindsim.controller import KinematicLimits
from unwindsim.export import build_viewer_bundle
from unwindsim.geometry import ViewMode
from unwindsim.simulator import HeadTrace, apply_head_trace, run_scenario
from unwindsim.world import ClearancePolicy, OccupancyGrid, Pedestrian, Scenario


def small_scenario() -> Scenario:
    occ = np.zeros((60, 80), dtype=bool)
    occ[0, :] = occ[-1, :] = True
    occ[:, 0] = occ[:, -1] = True
    occ[24:36, 30:50] = True  # a block to drive around
    return Scenario(
        grid=OccupancyGrid(occ, 0.25),
        robot_start=(3.0, 3.0, 0.0),
        route=[(16.0, 3.0), (16.0, 12.0), (3.0, 12.0)],
        pedestrians=[
            Pedestrian(id="stroller", waypoints=((10.0, 6.5), (10.0, 8.5)), speed=0.4, loop=True)
        ],
        limits=KinematicLimits(),
        clearance_policy=ClearancePolicy(),
        name="viewer-fixture",
    )


def main():
    scenario = small_scenario()
    config = RunConfig()
    log = run_scenario(scenario, config, "UR")
    assert log.goal_reached, log.error
    bundle = build_viewer_bundle(log, scenario)

    # a ghost head trace that actually moves: slow sweep plus a nod
    times = [s.t for s in log.steps]
    yaws = [0.35 * math.sin(2 * math.pi * t / 11.0) + 0.1 for t in times]
    trace = HeadTrace.scripted(list(zip(times, yaws)))

    expected = {}
    for mode in (ViewMode.UR, ViewMode.CR):
        samples = apply_head_trace(log, trace, mode)
        expected[mode.value] = [[s.t, s.world_view_yaw] for s in samples]

    out = {
        "bundle": bundle,
        "trace": [[t, y] for t, y in zip(times, yaws)],
        "expected": expected,
    }
    dest = pathlib.Path(__file__).resolve().parents[1] / "frontend" / "test" / "fixtures"
    dest.mkdir(parents=True, exist_ok=True)
    path = dest / "ghost.json"
    path.write_text(json.dumps(out) + "\n")
    print(f"wrote {path} ({len(times)} steps, {log.duration:.1f}s replay)")


if __name__ == "__main__":
    main()
