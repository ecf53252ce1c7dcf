"""Static map, scripted pedestrians, and clearance queries.

The map is a boolean occupancy grid; occupied cells are solid axis-aligned
squares and clearance is measured to the nearest cell face or corner, not
the cell center, which keeps the numbers conservative. Pedestrians are
points that walk waypoint polylines at constant speed on a fixed schedule,
so every query is a pure function of time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Optional

import numpy as np
from scipy.ndimage import distance_transform_edt
from scipy.spatial import cKDTree

from .errors import FormatError, OutOfBounds, UnwindSimError
from .jsonio import check_format

if TYPE_CHECKING:
    from .controller import KinematicLimits

SCENARIO_FORMAT = "scenario/1"


class OccupancyGrid:
    """Boolean grid; cell (col, row) spans
    [origin_x + col*res, origin_x + (col+1)*res] x [origin_y + row*res, ...].
    """

    def __init__(self, occupied: np.ndarray, resolution: float, origin=(0.0, 0.0)):
        occ = np.asarray(occupied, dtype=bool)
        if occ.ndim != 2:
            raise UnwindSimError("occupancy array must be 2-D (rows, cols)")
        if resolution <= 0:
            raise UnwindSimError("resolution must be positive")
        self.occupied = occ
        self.occupied.setflags(write=False)
        self.resolution = float(resolution)
        self.origin = (float(origin[0]), float(origin[1]))
        self._tree: Optional[cKDTree] = None
        self._centers: Optional[np.ndarray] = None
        self._edt: Optional[np.ndarray] = None

    @property
    def width(self) -> int:
        return self.occupied.shape[1]

    @property
    def height(self) -> int:
        return self.occupied.shape[0]

    def world_bounds(self):
        ox, oy = self.origin
        return (ox, oy, ox + self.width * self.resolution, oy + self.height * self.resolution)

    def in_bounds(self, x: float, y: float) -> bool:
        x0, y0, x1, y1 = self.world_bounds()
        return x0 <= x <= x1 and y0 <= y <= y1

    def cell_of(self, x: float, y: float):
        """(col, row) of the cell containing a world point (clamped at the
        far edges so boundary points stay indexable)."""
        col = int((x - self.origin[0]) / self.resolution)
        row = int((y - self.origin[1]) / self.resolution)
        col = min(max(col, 0), self.width - 1)
        row = min(max(row, 0), self.height - 1)
        return col, row

    def cell_center(self, col: int, row: int):
        return (
            self.origin[0] + (col + 0.5) * self.resolution,
            self.origin[1] + (row + 0.5) * self.resolution,
        )

    def is_free(self, x: float, y: float) -> bool:
        if not self.in_bounds(x, y):
            return False
        col, row = self.cell_of(x, y)
        return not self.occupied[row, col]

    # -- clearance ---------------------------------------------------------

    def _occupied_index(self):
        if self._tree is None:
            rows, cols = np.nonzero(self.occupied)
            if len(rows) == 0:
                self._centers = np.empty((0, 2))
                self._tree = None
                return None, self._centers
            cx = self.origin[0] + (cols + 0.5) * self.resolution
            cy = self.origin[1] + (rows + 0.5) * self.resolution
            self._centers = np.column_stack([cx, cy])
            self._tree = cKDTree(self._centers)
        return self._tree, self._centers

    def wall_clearance_batch(self, points: np.ndarray) -> np.ndarray:
        """Exact Euclidean distance from each point to the nearest occupied
        cell rectangle. Points must already be in bounds."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if not self.occupied.any():
            return np.full(len(pts), math.inf)
        tree, centers = self._occupied_index()
        half = 0.5 * self.resolution
        halfdiag = half * math.sqrt(2.0)
        n_occ = len(centers)

        # The nearest rectangle's center lies within (nearest center
        # distance + half-diagonal). Query k nearest centers at once and
        # refine; fall back to a ball query for the rare points where k
        # neighbors did not cover that radius.
        k = min(8, n_occ)
        d_center, idx = tree.query(pts, k=k)
        d_center = d_center.reshape(len(pts), k)
        idx = idx.reshape(len(pts), k)
        c = centers[idx]  # (n, k, 2)
        dx = np.abs(pts[:, None, 0] - c[:, :, 0]) - half
        dy = np.abs(pts[:, None, 1] - c[:, :, 1]) - half
        np.clip(dx, 0.0, None, out=dx)
        np.clip(dy, 0.0, None, out=dy)
        out = np.sqrt(np.min(dx * dx + dy * dy, axis=1))
        if k < n_occ:
            uncovered = d_center[:, -1] < out + halfdiag
            for i in np.flatnonzero(uncovered):
                cand = centers[tree.query_ball_point(pts[i], out[i] + halfdiag + 1e-12)]
                if len(cand):
                    ddx = np.clip(np.abs(pts[i, 0] - cand[:, 0]) - half, 0.0, None)
                    ddy = np.clip(np.abs(pts[i, 1] - cand[:, 1]) - half, 0.0, None)
                    out[i] = math.sqrt(float(np.min(ddx * ddx + ddy * ddy)))
        return out

    def _edt_meters(self) -> np.ndarray:
        # Distance from each cell center to the nearest occupied cell
        # center, in meters; zero inside occupied cells.
        if self._edt is None:
            self._edt = distance_transform_edt(~self.occupied) * self.resolution
            self._edt.setflags(write=False)
        return self._edt

    def wall_clearance_lower_bound(self, points: np.ndarray) -> np.ndarray:
        """Cheap per-point lower bound on wall clearance via a precomputed
        distance transform; exact refinement only matters near the bound."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if not self.occupied.any():
            return np.full(len(pts), math.inf)
        edt = self._edt_meters()
        col = ((pts[:, 0] - self.origin[0]) / self.resolution).astype(np.int64)
        row = ((pts[:, 1] - self.origin[1]) / self.resolution).astype(np.int64)
        np.clip(col, 0, self.width - 1, out=col)
        np.clip(row, 0, self.height - 1, out=row)
        # EDT is center-to-center; the query point and the nearest cell
        # face are each at most half a diagonal from their centers.
        return edt[row, col] - self.resolution * math.sqrt(2.0)

    def to_doc(self) -> dict:
        rows = ["".join("1" if v else "0" for v in row) for row in self.occupied]
        return {
            "width": self.width,
            "height": self.height,
            "resolution": self.resolution,
            "origin": [self.origin[0], self.origin[1]],
            "rows": rows,
        }

    @staticmethod
    def from_doc(doc: dict) -> "OccupancyGrid":
        rows = doc["rows"]
        if len(rows) != doc["height"] or any(len(r) != doc["width"] for r in rows):
            raise FormatError("grid rows do not match declared width/height")
        occ = np.array([[ch == "1" for ch in r] for r in rows], dtype=bool)
        return OccupancyGrid(occ, doc["resolution"], tuple(doc["origin"]))


def min_wall_clearance(position, grid: OccupancyGrid) -> float:
    """Distance from a world point to the nearest occupied cell boundary;
    +inf on an empty grid."""
    x, y = float(position[0]), float(position[1])
    if not grid.in_bounds(x, y):
        raise OutOfBounds(f"position {(x, y)} outside grid bounds {grid.world_bounds()}")
    return float(grid.wall_clearance_batch(np.array([[x, y]]))[0])


@dataclass(frozen=True)
class Pedestrian:
    """Point pedestrian walking a waypoint polyline at constant speed."""

    id: str
    waypoints: tuple
    speed: float
    start_time: float = 0.0
    loop: bool = False

    def __post_init__(self):
        if self.speed < 0:
            raise UnwindSimError(f"pedestrian {self.id}: speed must be >= 0")
        if len(self.waypoints) < 1:
            raise UnwindSimError(f"pedestrian {self.id}: needs at least one waypoint")
        object.__setattr__(
            self, "waypoints", tuple((float(x), float(y)) for x, y in self.waypoints)
        )

    def _cumlens(self):
        cached = getattr(self, "_cumlens_cache", None)
        if cached is not None:
            return cached
        pts = np.asarray(self.waypoints)
        if len(pts) == 1:
            cum = np.array([0.0])
        else:
            seg = np.diff(pts, axis=0)
            cum = np.concatenate([[0.0], np.cumsum(np.hypot(seg[:, 0], seg[:, 1]))])
        object.__setattr__(self, "_cumlens_cache", (pts, cum))
        return pts, cum


def pedestrian_position(p: Pedestrian, t: float):
    """Position at time t, or None before the pedestrian enters the scene."""
    if t < p.start_time:
        return None
    pts, cum = p._cumlens()
    total = float(cum[-1])
    if total <= 0.0 or p.speed == 0.0:
        return pts[0][0], pts[0][1]
    s = p.speed * (t - p.start_time)
    if p.loop:
        s = math.fmod(s, total)
    elif s >= total:
        return pts[-1][0], pts[-1][1]
    i = int(np.searchsorted(cum, s, side="right") - 1)
    i = min(i, len(pts) - 2)
    seg_len = cum[i + 1] - cum[i]
    u = (s - cum[i]) / seg_len
    x = pts[i][0] + u * (pts[i + 1][0] - pts[i][0])
    y = pts[i][1] + u * (pts[i + 1][1] - pts[i][1])
    return x, y


def pedestrian_positions_over(p: Pedestrian, times: np.ndarray):
    """Positions at an array of times: (present mask, (n, 2) positions).

    Positions for absent times are filled with the first waypoint; use the
    mask. Matches pedestrian_position pointwise.
    """
    times = np.asarray(times, dtype=float)
    pts, cum = p._cumlens()
    present = times >= p.start_time
    total = float(cum[-1])
    if total <= 0.0 or p.speed == 0.0:
        xy = np.broadcast_to(pts[0], (len(times), 2)).copy()
        return present, xy
    s = p.speed * (times - p.start_time)
    if p.loop:
        s = np.fmod(s, total)
    else:
        s = np.minimum(s, total)
    s = np.maximum(s, 0.0)
    x = np.interp(s, cum, pts[:, 0])
    y = np.interp(s, cum, pts[:, 1])
    return present, np.column_stack([x, y])


@dataclass(frozen=True)
class ClearancePolicy:
    min_wall: float = 0.9
    min_person: float = 1.0

    def __post_init__(self):
        if self.min_wall <= 0 or self.min_person <= 0:
            raise UnwindSimError("clearance policy distances must be positive")


@dataclass
class Scenario:
    """Everything a run needs: map, start pose, waypoint route, pedestrian
    schedule, kinematic limits, and the clearance policy audits check."""

    grid: OccupancyGrid
    robot_start: tuple  # (x, y, theta)
    route: list
    pedestrians: list = field(default_factory=list)
    limits: "KinematicLimits" = None
    clearance_policy: ClearancePolicy = field(default_factory=ClearancePolicy)
    name: str = ""

    def __post_init__(self):
        if self.limits is None:
            from .controller import KinematicLimits

            self.limits = KinematicLimits()
        x, y, _ = self.robot_start
        if not self.grid.is_free(x, y):
            raise UnwindSimError("robot start is not in free space")
        for wx, wy in self.route:
            if not self.grid.is_free(wx, wy):
                raise UnwindSimError(f"route waypoint {(wx, wy)} is not in free space")

    def to_doc(self) -> dict:
        return {
            "format": SCENARIO_FORMAT,
            "name": self.name,
            "grid": self.grid.to_doc(),
            "robot_start": {
                "x": self.robot_start[0],
                "y": self.robot_start[1],
                "theta": self.robot_start[2],
            },
            "route": [[x, y] for x, y in self.route],
            "pedestrians": [
                {
                    "id": p.id,
                    "waypoints": [[x, y] for x, y in p.waypoints],
                    "speed": p.speed,
                    "start_time": p.start_time,
                    "loop": p.loop,
                }
                for p in self.pedestrians
            ],
            "limits": self.limits.to_doc(),
            "clearance_policy": {
                "min_wall": self.clearance_policy.min_wall,
                "min_person": self.clearance_policy.min_person,
            },
        }

    @staticmethod
    def from_doc(doc: dict) -> "Scenario":
        from .controller import KinematicLimits

        check_format(doc, SCENARIO_FORMAT)
        rs = doc["robot_start"]
        return Scenario(
            grid=OccupancyGrid.from_doc(doc["grid"]),
            robot_start=(rs["x"], rs["y"], rs["theta"]),
            route=[(x, y) for x, y in doc["route"]],
            pedestrians=[
                Pedestrian(
                    id=p["id"],
                    waypoints=tuple((x, y) for x, y in p["waypoints"]),
                    speed=p["speed"],
                    start_time=p.get("start_time", 0.0),
                    loop=p.get("loop", False),
                )
                for p in doc["pedestrians"]
            ],
            limits=KinematicLimits.from_doc(doc["limits"]),
            clearance_policy=ClearancePolicy(
                min_wall=doc["clearance_policy"]["min_wall"],
                min_person=doc["clearance_policy"]["min_person"],
            ),
            name=doc.get("name", ""),
        )


def min_person_distance(position, scenario: Scenario, t: float) -> float:
    """Distance to the nearest pedestrian present at time t; +inf if none."""
    x, y = float(position[0]), float(position[1])
    best = math.inf
    for p in scenario.pedestrians:
        pos = pedestrian_position(p, t)
        if pos is None:
            continue
        d = math.hypot(x - pos[0], y - pos[1])
        if d < best:
            best = d
    return best


def person_positions_at(scenario: Scenario, t: float) -> np.ndarray:
    """(n, 2) array of pedestrians present at time t (may be empty)."""
    pts = [pedestrian_position(p, t) for p in scenario.pedestrians]
    pts = [p for p in pts if p is not None]
    if not pts:
        return np.empty((0, 2))
    return np.asarray(pts, dtype=float)
