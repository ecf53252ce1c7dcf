#!/usr/bin/env python3
"""Build the bundled campus-lite scenario and default run config.

A ring corridor around a central block, one alcove and one pillar notch to
make the path kink, and two scripted pedestrians timed to meet the robot
without forcing it below the 1 m person clearance. Sized so a full run
finishes in a few seconds of wall-clock time.

Rerun after editing and commit the regenerated JSON:
    python tools/make_campus_lite.py
"""

import pathlib
import sys

import numpy as np

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from unwindsim.config import RunConfig
from unwindsim.controller import KinematicLimits
from unwindsim.jsonio import dump_json
from unwindsim.world import ClearancePolicy, OccupancyGrid, Pedestrian, Scenario

RES = 0.1  # meters per cell
W, H = 20.0, 14.0  # outer extent in meters


def fill_rect(occ, x0, y0, x1, y1):
    """Occupy every cell intersecting the rectangle [x0,x1] x [y0,y1]."""
    c0 = max(0, int(np.floor(x0 / RES + 1e-9)))
    r0 = max(0, int(np.floor(y0 / RES + 1e-9)))
    c1 = min(occ.shape[1], int(np.ceil(x1 / RES - 1e-9)))
    r1 = min(occ.shape[0], int(np.ceil(y1 / RES - 1e-9)))
    occ[r0:r1, c0:c1] = True


def build_scenario() -> Scenario:
    occ = np.zeros((int(round(H / RES)), int(round(W / RES))), dtype=bool)

    # outer walls, 0.2 m thick
    fill_rect(occ, 0.0, 0.0, W, 0.2)
    fill_rect(occ, 0.0, H - 0.2, W, H)
    fill_rect(occ, 0.0, 0.0, 0.2, H)
    fill_rect(occ, W - 0.2, 0.0, W, H)

    # central block leaves a 2.8 m ring corridor
    fill_rect(occ, 3.0, 3.0, 17.0, 11.0)

    # an alcove widening the right corridor locally (a "room" mouth)
    occ_room = (17.0, 5.0, 17.0, 9.0)  # carved below by clearing cells
    clear_c0 = int(round(16.0 / RES))
    clear_c1 = int(round(17.0 / RES))
    clear_r0 = int(round(5.5 / RES))
    clear_r1 = int(round(8.5 / RES))
    occ[clear_r0:clear_r1, clear_c0:clear_c1] = False

    # a pillar jutting into the top corridor to force a swerve
    fill_rect(occ, 9.6, 11.0, 10.4, 11.5)

    grid = OccupancyGrid(occ, RES, (0.0, 0.0))

    # Facing north at launch: the robot pivots a quarter turn before the
    # first leg, which also pushes total rotation well past a full loop.
    start = (1.6, 1.6, np.pi / 2)
    route = [
        (18.4, 1.6),   # east along the bottom corridor
        (18.4, 12.4),  # north along the right corridor
        (1.6, 12.4),   # west along the top corridor (past the pillar)
        (1.6, 2.4),    # south back down the left corridor
    ]

    # Pedestrians clamp at their final waypoint forever, so every park
    # spot must stay well clear of the robot's route (especially the goal
    # area, or the person policy walls the goal off permanently).
    pedestrians = [
        # Head-on pass in the bottom corridor, close enough (0.95 m off
        # the centerline the robot tracks) that the robot has to dodge;
        # then turns south and parks in the bottom-left pocket.
        Pedestrian(
            id="walker-bottom",
            waypoints=((18.4, 2.55), (0.9, 2.55), (0.9, 0.85)),
            speed=1.2,
            start_time=0.0,
            loop=False,
        ),
        # Walks the right corridor southbound hugging the east wall while
        # the robot drives north up the middle, then parks in the
        # bottom-right pocket long after the robot has cornered away.
        Pedestrian(
            id="walker-right",
            waypoints=((19.5, 13.2), (19.5, 0.9)),
            speed=1.0,
            start_time=16.0,
            loop=False,
        ),
        # Paces a loop inside the alcove off the right corridor.
        Pedestrian(
            id="alcove-loop",
            waypoints=((16.2, 5.8), (16.8, 5.8), (16.8, 8.2), (16.2, 8.2)),
            speed=0.6,
            start_time=0.0,
            loop=True,
        ),
    ]

    return Scenario(
        grid=grid,
        robot_start=start,
        route=route,
        pedestrians=pedestrians,
        limits=KinematicLimits(),
        clearance_policy=ClearancePolicy(min_wall=0.9, min_person=1.0),
        name="campus-lite",
    )


def main():
    root = pathlib.Path(__file__).resolve().parents[1]
    data = root / "src" / "unwindsim" / "data"
    data.mkdir(parents=True, exist_ok=True)
    scenario = build_scenario()
    dump_json(scenario.to_doc(), data / "campus_lite.json")
    dump_json(RunConfig().to_doc(), data / "default_config.json")
    print(f"wrote {data / 'campus_lite.json'}")
    print(f"wrote {data / 'default_config.json'}")


if __name__ == "__main__":
    main()
