import { describe, expect, it } from "vitest";

import { degrees, wrapAngle } from "../src/angles.js";
import { validateBundle, ViewerBundle } from "../src/bundle.js";
import {
  applyPointerDelta,
  cameraWorldYaw,
  hudMetrics,
  initialState,
  PITCH_LIMIT,
  robotYawAt,
  toggleMode,
  advancePlayback,
} from "../src/state.js";

/** Small synthetic bundle: the robot turns 90 degrees over one second. */
function syntheticBundle(): ViewerBundle {
  const n = 21;
  const t: number[] = [];
  const theta: number[] = [];
  const x: number[] = [];
  const y: number[] = [];
  for (let i = 0; i < n; i++) {
    t.push(i * 0.05);
    theta.push(((Math.PI / 2) * i) / (n - 1));
    x.push(i * 0.05);
    y.push(0);
  }
  return validateBundle({
    format: "viewer-bundle/1",
    scenario_hash: "s",
    recorded_mode: "UR",
    dt: 0.05,
    duration: 1.0,
    camera_height: 1.5,
    wall_height: 2.4,
    bounds: [0, 0, 10, 10],
    walls: [],
    robot_track: { t, x, y, theta },
    camera_frame_yaw: { UR: theta.map((v) => -v), CR: theta.map(() => 0) },
    pedestrians: [],
    clearance: { wall: theta.map(() => 2.0), person: theta.map(() => null) },
  });
}

describe("cameraWorldYaw", () => {
  it("UR shows only the head yaw, whatever the robot does", () => {
    const bundle = syntheticBundle();
    const state = { ...initialState("UR"), headYaw: 0.2 };
    for (const t of [0, 0.25, 0.5, 0.99]) {
      expect(cameraWorldYaw({ ...state, playbackT: t }, bundle)).toBeCloseTo(0.2, 12);
    }
  });

  it("CR adds the interpolated robot yaw", () => {
    const bundle = syntheticBundle();
    const state = { ...initialState("CR"), headYaw: 0.2, playbackT: 0.5 };
    const want = wrapAngle(robotYawAt(bundle, 0.5) + 0.2);
    expect(cameraWorldYaw(state, bundle)).toBeCloseTo(want, 12);
  });
});

describe("toggleMode", () => {
  it("keeps the rendered yaw continuous at the toggle instant", () => {
    const bundle = syntheticBundle();
    let state = { ...initialState("UR"), headYaw: 0.4, playbackT: 0.7 };
    const before = cameraWorldYaw(state, bundle);
    state = toggleMode(state, bundle);
    expect(state.mode).toBe("CR");
    expect(cameraWorldYaw(state, bundle)).toBeCloseTo(before, 12);
  });

  it("toggling at robot yaw 90deg with rendered yaw 0 gives head yaw -90deg", () => {
    const bundle = syntheticBundle();
    // at t = 1.0 the robot yaw is exactly 90 degrees
    let state = { ...initialState("UR"), headYaw: 0.0, playbackT: 1.0 };
    state = toggleMode(state, bundle);
    expect(state.mode).toBe("CR");
    expect(degrees(state.headYaw)).toBeCloseTo(-90, 9);
  });

  it("double toggle restores the head yaw at fixed time", () => {
    const bundle = syntheticBundle();
    const state = { ...initialState("UR"), headYaw: 0.4, playbackT: 0.6 };
    const twice = toggleMode(toggleMode(state, bundle), bundle);
    expect(twice.mode).toBe("UR");
    expect(twice.headYaw).toBeCloseTo(state.headYaw, 12);
  });
});

describe("pointer input", () => {
  it("clamps pitch to +/-80 degrees", () => {
    let state = initialState();
    state = applyPointerDelta(state, 0, -100000);
    expect(state.headPitch).toBe(PITCH_LIMIT);
    state = applyPointerDelta(state, 0, 200000);
    expect(state.headPitch).toBe(-PITCH_LIMIT);
  });

  it("keeps head yaw wrapped", () => {
    let state = initialState();
    for (let i = 0; i < 100; i++) state = applyPointerDelta(state, 500, 0);
    expect(state.headYaw).toBeGreaterThan(-Math.PI);
    expect(state.headYaw).toBeLessThanOrEqual(Math.PI);
  });
});

describe("playback", () => {
  it("is clamped to the replay duration and freezes when paused", () => {
    const bundle = syntheticBundle();
    let state = initialState();
    state = advancePlayback(state, bundle, 5.0);
    expect(state.playbackT).toBe(bundle.duration);
    state = { ...state, playbackT: 0.3, paused: true };
    expect(advancePlayback(state, bundle, 1.0).playbackT).toBe(0.3);
  });
});

describe("hudMetrics", () => {
  it("reports deviation as the absolute planar angle", () => {
    const bundle = syntheticBundle();
    const state = { ...initialState("UR"), headYaw: 0.0, playbackT: 1.0 };
    const m = hudMetrics(state, bundle);
    expect(m.deviationDeg).toBeCloseTo(90, 9);
    expect(m.minClearance).toBe(2.0);
  });

  it("deviation is zero when the view is aligned with the robot", () => {
    const bundle = syntheticBundle();
    const state = { ...initialState("CR"), headYaw: 0.0, playbackT: 1.0 };
    const m = hudMetrics(state, bundle);
    expect(m.deviationDeg).toBeCloseTo(0, 9);
  });
});
