#!/usr/bin/env python3
"""Walk through the core idea: counter-rotating the camera frame so the
robot's turns never move the user's viewpoint.

Run:  python demos/01_unwinding_rotations.py
"""

import math

import numpy as np

from unwindsim import (
    PlanarRotation,
    RotationSetDescriptor,
    Vec3,
    ViewMode,
    capability_check,
    embed_planar,
    rot2_from_angle,
    unwind_point,
    unwind_rotation,
    viewpoint_heading,
)

# ---------------------------------------------------------------------------
# 1. A robot yaw is a planar rotation; lifted to 3D it spins about +z.
# ---------------------------------------------------------------------------
yaw = rot2_from_angle(math.radians(60))
R = embed_planar(yaw)
print("robot yaw 60 deg as a 3x3 matrix:")
print(np.array_str(R.matrix, precision=3, suppress_small=True))

# ---------------------------------------------------------------------------
# 2. Unwinding: the camera frame applies the inverse rotation, so a point
#    seen by the camera lands where it was before the robot turned.
# ---------------------------------------------------------------------------
p = Vec3(2.0, 0.0, 1.5)  # something in front of the camera
p_unwound = unwind_point(p, R)
p_back = R.apply(p_unwound)
print(f"\npoint {p}")
print(f"in the counter-rotated camera frame: ({p_unwound.x:+.3f}, {p_unwound.y:+.3f}, {p_unwound.z:+.3f})")
print(f"robot rotation re-applied:           ({p_back.x:+.3f}, {p_back.y:+.3f}, {p_back.z:+.3f})  <- recovered")

C = unwind_rotation(R)
print("\ncamera * robot =\n", np.array_str(C.compose(R).matrix, precision=3, suppress_small=True))

# ---------------------------------------------------------------------------
# 3. What the user actually sees. In CR (coupled) mode the viewpoint turns
#    with the robot; in UR (unwound) mode only the user's own head counts.
# ---------------------------------------------------------------------------
head = rot2_from_angle(math.radians(10))
print("\nrobot at 60 deg, head at 10 deg:")
for mode in (ViewMode.CR, ViewMode.UR):
    view = viewpoint_heading(yaw, head, mode)
    print(f"  {mode.value}: world viewpoint = {view.degrees:6.1f} deg")

print("\nrobot spins, user holds still; UR viewpoint never moves:")
for robot_deg in (0, 45, 90, 180, 270):
    view = viewpoint_heading(rot2_from_angle(math.radians(robot_deg)), head, ViewMode.UR)
    print(f"  robot {robot_deg:3d} deg -> UR viewpoint {view.degrees:5.1f} deg")

# ---------------------------------------------------------------------------
# 4. When is unwinding even possible? The camera mount must be able to
#    realize the inverse of every robot rotation.
# ---------------------------------------------------------------------------
RSD = RotationSetDescriptor
cases = [
    ("360 camera on a drone (full 3D turns)", RSD.FULL_SO3, RSD.FULL_SO3),
    ("pan-tilt unit on a drone", RSD.PAN_TILT, RSD.FULL_SO3),
    ("pan-tilt unit on a flat-ground robot", RSD.PAN_TILT, RSD.YAW_ONLY),
]
print("\ncapability check (can this camera unwind this robot?):")
for label, cam, rob in cases:
    print(f"  {label}: {capability_check(cam, rob)}")
