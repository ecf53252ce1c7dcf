"""Rotation algebra for a camera riding a turning robot.

Planar yaw values live in (-pi, pi]; full 3D rotations are explicit 3x3
orthonormal matrices (inverse == transpose, so unwinding a rotation never
needs a solve). ``viewpoint_heading`` is the single place that defines what
the user actually sees in the unwound (UR) and coupled (CR) viewing modes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidAngle, InvalidRotation

TWO_PI = 2.0 * math.pi

# Orthonormality / determinant tolerance for accepting a rotation matrix.
ROTATION_TOL = 1e-9


def wrap_angle(angle: float) -> float:
    """Wrap an angle to (-pi, pi]. The one wrap used everywhere."""
    if not math.isfinite(angle):
        raise InvalidAngle(f"angle must be finite, got {angle!r}")
    a = math.fmod(angle, TWO_PI)
    if a > math.pi:
        a -= TWO_PI
    elif a <= -math.pi:
        a += TWO_PI
    return a


@dataclass(frozen=True)
class PlanarRotation:
    """Yaw about +z, stored wrapped to (-pi, pi]."""

    angle: float

    def __post_init__(self):
        object.__setattr__(self, "angle", wrap_angle(self.angle))

    def compose(self, other: "PlanarRotation") -> "PlanarRotation":
        return PlanarRotation(self.angle + other.angle)

    def inverse(self) -> "PlanarRotation":
        return PlanarRotation(-self.angle)

    @property
    def degrees(self) -> float:
        return math.degrees(self.angle)


@dataclass(frozen=True)
class Vec3:
    x: float
    y: float
    z: float

    def __post_init__(self):
        for c in (self.x, self.y, self.z):
            if not math.isfinite(c):
                raise InvalidAngle(f"vector components must be finite, got {c!r}")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    @staticmethod
    def from_array(a) -> "Vec3":
        return Vec3(float(a[0]), float(a[1]), float(a[2]))


class Rotation3:
    """A 3x3 rotation matrix, validated on construction and never silently
    re-orthogonalized."""

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        m = np.asarray(matrix, dtype=float)
        if m.shape != (3, 3):
            raise InvalidRotation(f"expected 3x3 matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InvalidRotation("rotation matrix has non-finite entries")
        err = m.T @ m - np.eye(3)
        if np.max(np.abs(err)) > ROTATION_TOL:
            raise InvalidRotation("matrix is not orthonormal within 1e-9")
        if abs(np.linalg.det(m) - 1.0) > ROTATION_TOL:
            raise InvalidRotation("matrix determinant is not +1 within 1e-9")
        self.matrix = m
        self.matrix.setflags(write=False)

    @staticmethod
    def identity() -> "Rotation3":
        return Rotation3(np.eye(3))

    def compose(self, other: "Rotation3") -> "Rotation3":
        return Rotation3(self.matrix @ other.matrix)

    def inverse(self) -> "Rotation3":
        # Orthonormal, so the inverse is the transpose.
        return Rotation3(self.matrix.T.copy())

    def apply(self, v: Vec3) -> Vec3:
        return Vec3.from_array(self.matrix @ v.as_array())

    def __eq__(self, other):
        return isinstance(other, Rotation3) and np.array_equal(self.matrix, other.matrix)

    def __repr__(self):
        return f"Rotation3({self.matrix.tolist()!r})"


class RotationSetDescriptor(Enum):
    """Which rotations a device (robot base or camera mount) can realize."""

    NONE = "none"
    YAW_ONLY = "yaw_only"
    PAN_TILT = "pan_tilt"
    FULL_SO3 = "full_SO3"


# Rank in the capability lattice: a camera descriptor can unwind every
# robot descriptor of equal or lower rank.
_CAPABILITY_RANK = {
    RotationSetDescriptor.NONE: 0,
    RotationSetDescriptor.YAW_ONLY: 1,
    RotationSetDescriptor.PAN_TILT: 2,
    RotationSetDescriptor.FULL_SO3: 3,
}

# pan_tilt covers yaw_only but not the other way round; both cover none.
_CAPABILITY_COVERS = {
    RotationSetDescriptor.FULL_SO3: {
        RotationSetDescriptor.FULL_SO3,
        RotationSetDescriptor.PAN_TILT,
        RotationSetDescriptor.YAW_ONLY,
        RotationSetDescriptor.NONE,
    },
    RotationSetDescriptor.PAN_TILT: {
        RotationSetDescriptor.PAN_TILT,
        RotationSetDescriptor.YAW_ONLY,
        RotationSetDescriptor.NONE,
    },
    RotationSetDescriptor.YAW_ONLY: {
        RotationSetDescriptor.YAW_ONLY,
        RotationSetDescriptor.NONE,
    },
    RotationSetDescriptor.NONE: {RotationSetDescriptor.NONE},
}


class ViewMode(Enum):
    """UR: camera frame counter-rotates so the viewpoint ignores robot yaw.
    CR: camera frame is fixed to the robot, so the viewpoint turns with it."""

    UR = "UR"
    CR = "CR"


def rot2_from_angle(angle: float) -> PlanarRotation:
    """Build a planar rotation from an angle in radians (wrapped)."""
    return PlanarRotation(angle)


def embed_planar(r: PlanarRotation) -> Rotation3:
    """Lift a planar yaw into 3D as a rotation about +z (up)."""
    c, s = math.cos(r.angle), math.sin(r.angle)
    return Rotation3(np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]))


def unwind_rotation(robot_rotation: Rotation3) -> Rotation3:
    """Camera-frame rotation that cancels the robot's rotation (its inverse)."""
    return robot_rotation.inverse()


def unwind_point(p_c: Vec3, robot_rotation: Rotation3) -> Vec3:
    """Express a camera-frame point in the counter-rotated camera frame.

    Applying the robot rotation to the result recovers the input point.
    """
    return unwind_rotation(robot_rotation).apply(p_c)


def capability_check(camera: RotationSetDescriptor, robot: RotationSetDescriptor) -> bool:
    """True iff the camera mount can unwind every rotation the robot can make.

    All four descriptor sets are closed under inversion, so this reduces to
    set containment on the small lattice above.
    """
    return robot in _CAPABILITY_COVERS[camera]


def viewpoint_heading(
    robot_yaw: PlanarRotation, head_yaw: PlanarRotation, mode: ViewMode
) -> PlanarRotation:
    """World-frame viewing direction of the user.

    CR couples the view to the robot: world yaw = robot yaw + head yaw.
    UR unwinds the robot's yaw, so only the user's own head motion counts.
    """
    if mode is ViewMode.CR:
        return robot_yaw.compose(head_yaw)
    return head_yaw
