"""Viewer bundle assembly: walls as merged boundary segments, robot and
pedestrian tracks resampled on the replay clock, and camera-frame yaw
tracks for both viewing modes. The browser viewer is a read-only consumer
of this file; nothing it does can alter a trajectory.
"""

from __future__ import annotations

import numpy as np

from .errors import UnwindSimError
from .jsonio import check_format, doc_hash, inf_to_null
from .simulator import ReplayLog
from .world import OccupancyGrid, Scenario, pedestrian_position

BUNDLE_FORMAT = "viewer-bundle/1"

CAMERA_HEIGHT = 1.5  # meters above the base, like the study robot
WALL_HEIGHT = 2.4


def boundary_segments(grid: OccupancyGrid):
    """Maximal straight wall segments along occupied/free cell boundaries.

    Returns a list of (x0, y0, x1, y1) in world coordinates.
    """
    occ = grid.occupied
    h, w = occ.shape
    res = grid.resolution
    ox, oy = grid.origin
    segments = []

    padded = np.zeros((h + 2, w + 2), dtype=bool)
    padded[1:-1, 1:-1] = occ

    # Horizontal faces: between cell rows r-1 and r of the padded grid.
    for r in range(h + 1):
        exposed = padded[r, 1:-1] != padded[r + 1, 1:-1]
        y = oy + r * res
        for c0, c1 in _runs(exposed):
            segments.append((ox + c0 * res, y, ox + c1 * res, y))
    # Vertical faces.
    for c in range(w + 1):
        exposed = padded[1:-1, c] != padded[1:-1, c + 1]
        x = ox + c * res
        for r0, r1 in _runs(exposed):
            segments.append((x, oy + r0 * res, x, oy + r1 * res))
    return segments


def _runs(mask: np.ndarray):
    """Yield (start, end) index pairs for each run of True values; end is
    exclusive, so a run of n cells spans n resolution units."""
    idx = np.flatnonzero(mask)
    if len(idx) == 0:
        return
    start = prev = idx[0]
    for i in idx[1:]:
        if i != prev + 1:
            yield (start, prev + 1)
            start = i
        prev = i
    yield (start, prev + 1)


def build_viewer_bundle(log: ReplayLog, scenario: Scenario) -> dict:
    """Assemble the viewer-bundle/1 document for a replay of a scenario."""
    if log.scenario_hash != doc_hash(scenario.to_doc()):
        raise UnwindSimError("replay was not produced from this scenario (hash mismatch)")

    x0, y0, th0 = log.start
    times = [0.0] + [s.t for s in log.steps]
    xs = [x0] + [s.x for s in log.steps]
    ys = [y0] + [s.y for s in log.steps]
    thetas = [th0] + [s.theta for s in log.steps]
    wall_clear = [None] + [inf_to_null(s.min_wall_clearance) for s in log.steps]
    person_clear = [None] + [inf_to_null(s.min_person_distance) for s in log.steps]

    peds = []
    for p in scenario.pedestrians:
        track = []
        for t in times:
            pos = pedestrian_position(p, t)
            track.append([pos[0], pos[1]] if pos is not None else None)
        peds.append({"id": p.id, "points": track})

    walls = boundary_segments(scenario.grid)
    bx0, by0, bx1, by1 = scenario.grid.world_bounds()
    return {
        "format": BUNDLE_FORMAT,
        "scenario_hash": log.scenario_hash,
        "recorded_mode": log.mode,
        "dt": log.dt,
        "duration": log.duration,
        "camera_height": CAMERA_HEIGHT,
        "wall_height": WALL_HEIGHT,
        "bounds": [bx0, by0, bx1, by1],
        "walls": [[a, b, c, d] for a, b, c, d in walls],
        "robot_track": {"t": times, "x": xs, "y": ys, "theta": thetas},
        "camera_frame_yaw": {
            "UR": [-th for th in thetas],
            "CR": [0.0 for _ in thetas],
        },
        "pedestrians": peds,
        "clearance": {"wall": wall_clear, "person": person_clear},
    }


def check_bundle(doc: dict) -> dict:
    """Validate the structural invariants the viewer relies on."""
    check_format(doc, BUNDLE_FORMAT)
    track = doc["robot_track"]
    n = len(track["t"])
    if not (len(track["x"]) == len(track["y"]) == len(track["theta"]) == n):
        raise UnwindSimError("robot track arrays have inconsistent lengths")
    for p in doc["pedestrians"]:
        if len(p["points"]) != n:
            raise UnwindSimError(f"pedestrian {p['id']} track length mismatch")
    return doc
