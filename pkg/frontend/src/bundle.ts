/** viewer-bundle/1 loading and validation.
 *
 * The bundle is produced by the simulator's export command and is the
 * only input the viewer has: wall segments, the robot pose track, both
 * modes' camera-frame yaw tracks, pedestrian tracks, and clearances.
 * The viewer is a read-only consumer; nothing here can change a
 * trajectory.
 */

export interface RobotTrack {
  t: number[];
  x: number[];
  y: number[];
  theta: number[];
}

export interface PedestrianTrack {
  id: string;
  /** world [x, y] per sample; null while the pedestrian is absent */
  points: Array<[number, number] | null>;
}

export interface ViewerBundle {
  format: string;
  scenario_hash: string;
  recorded_mode: string;
  dt: number;
  duration: number;
  camera_height: number;
  wall_height: number;
  bounds: [number, number, number, number];
  walls: Array<[number, number, number, number]>;
  robot_track: RobotTrack;
  camera_frame_yaw: { UR: number[]; CR: number[] };
  pedestrians: PedestrianTrack[];
  clearance: { wall: Array<number | null>; person: Array<number | null> };
}

export const BUNDLE_FORMAT = "viewer-bundle/1";

export function validateBundle(doc: unknown): ViewerBundle {
  const b = doc as ViewerBundle;
  if (!b || b.format !== BUNDLE_FORMAT) {
    throw new Error(`expected "format": "${BUNDLE_FORMAT}"`);
  }
  const n = b.robot_track?.t?.length ?? 0;
  if (n < 1) throw new Error("robot track is empty");
  for (const key of ["x", "y", "theta"] as const) {
    if (b.robot_track[key].length !== n) {
      throw new Error(`robot track ${key} length != t length`);
    }
  }
  if (b.camera_frame_yaw.UR.length !== n || b.camera_frame_yaw.CR.length !== n) {
    throw new Error("camera_frame_yaw track length mismatch");
  }
  for (const p of b.pedestrians) {
    if (p.points.length !== n) throw new Error(`pedestrian ${p.id} track length mismatch`);
  }
  for (let i = 1; i < n; i++) {
    if (!(b.robot_track.t[i] > b.robot_track.t[i - 1])) {
      throw new Error("robot track times are not strictly increasing");
    }
  }
  if (!(b.dt > 0) || !(b.duration >= 0)) throw new Error("bad dt/duration");
  return b;
}

/** Fetch the bundle from a URL or path (the ?bundle= query parameter). */
export async function loadBundle(url: string): Promise<ViewerBundle> {
  const resp = await fetch(url);
  if (!resp.ok) throw new Error(`failed to fetch ${url}: ${resp.status}`);
  return validateBundle(await resp.json());
}
