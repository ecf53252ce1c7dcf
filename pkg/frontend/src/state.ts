/** Viewer state and the camera math that must agree with the simulator.
 *
 * The contract mirrors the core library's viewpoint rule: in CR the
 * world-frame view yaw is robot theta plus head yaw; in UR the robot's
 * rotation is unwound and only the head yaw remains. Mode toggling
 * re-expresses the head yaw so the rendered view direction is continuous
 * at the toggle instant.
 */

import {
  degrees,
  interpolateLinear,
  interpolateYawTrack,
  wrapAngle,
} from "./angles.js";
import type { ViewerBundle } from "./bundle.js";

export type ViewMode = "UR" | "CR";

export interface ViewerState {
  playbackT: number;
  mode: ViewMode;
  headYaw: number;
  headPitch: number;
  paused: boolean;
}

export const PITCH_LIMIT = (80 * Math.PI) / 180;

export function initialState(mode: ViewMode = "UR"): ViewerState {
  return { playbackT: 0, mode, headYaw: 0, headPitch: 0, paused: false };
}

/** Robot yaw at an arbitrary playback time (shortest-arc interpolation). */
export function robotYawAt(bundle: ViewerBundle, t: number): number {
  return interpolateYawTrack(bundle.robot_track.t, bundle.robot_track.theta, t);
}

export function robotPositionAt(bundle: ViewerBundle, t: number): [number, number] {
  return [
    interpolateLinear(bundle.robot_track.t, bundle.robot_track.x, t),
    interpolateLinear(bundle.robot_track.t, bundle.robot_track.y, t),
  ];
}

/** World-frame camera yaw for the current state. */
export function cameraWorldYaw(state: ViewerState, bundle: ViewerBundle): number {
  if (state.mode === "UR") {
    return wrapAngle(state.headYaw);
  }
  return wrapAngle(robotYawAt(bundle, state.playbackT) + state.headYaw);
}

/** Switch UR/CR while keeping the rendered view direction unchanged. */
export function toggleMode(state: ViewerState, bundle: ViewerBundle): ViewerState {
  const rendered = cameraWorldYaw(state, bundle);
  const theta = robotYawAt(bundle, state.playbackT);
  const mode: ViewMode = state.mode === "UR" ? "CR" : "UR";
  const headYaw = mode === "CR" ? wrapAngle(rendered - theta) : rendered;
  return { ...state, mode, headYaw };
}

/** Apply pointer-lock mouse movement to the head orientation. */
export function applyPointerDelta(
  state: ViewerState,
  dxPixels: number,
  dyPixels: number,
  sensitivity = 0.0022,
): ViewerState {
  const headYaw = wrapAngle(state.headYaw - dxPixels * sensitivity);
  let headPitch = state.headPitch - dyPixels * sensitivity;
  headPitch = Math.min(PITCH_LIMIT, Math.max(-PITCH_LIMIT, headPitch));
  return { ...state, headYaw, headPitch };
}

/** Advance playback; time is driven by the replay clock, never the frame
 *  rate of the renderer (a slow machine just shows fewer frames). */
export function advancePlayback(state: ViewerState, bundle: ViewerBundle, dtWall: number): ViewerState {
  if (state.paused) return state;
  const playbackT = Math.min(bundle.duration, state.playbackT + dtWall);
  return { ...state, playbackT };
}

export interface HudMetrics {
  robotYaw: number;
  viewYaw: number;
  deviationDeg: number;
  minClearance: number | null;
  t: number;
  mode: ViewMode;
  paused: boolean;
}

/** Live readouts for the overlay. Deviation is the same absolute planar
 *  angle the analysis pipeline reports. */
export function hudMetrics(state: ViewerState, bundle: ViewerBundle): HudMetrics {
  const robotYaw = robotYawAt(bundle, state.playbackT);
  const viewYaw = cameraWorldYaw(state, bundle);
  const deviationDeg = Math.abs(degrees(wrapAngle(robotYaw - viewYaw)));
  const i = Math.min(
    bundle.robot_track.t.length - 1,
    Math.max(0, Math.round(state.playbackT / bundle.dt)),
  );
  const wall = bundle.clearance.wall[i];
  const person = bundle.clearance.person[i];
  let minClearance: number | null = null;
  if (wall !== null && person !== null) minClearance = Math.min(wall, person);
  else if (wall !== null) minClearance = wall;
  else if (person !== null) minClearance = person;
  return {
    robotYaw,
    viewYaw,
    deviationDeg,
    minClearance,
    t: state.playbackT,
    mode: state.mode,
    paused: state.paused,
  };
}
