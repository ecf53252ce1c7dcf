/** Angle helpers shared by playback and camera math.
 *
 * The convention matches the simulator: yaw in radians wrapped to
 * (-pi, pi], positive counter-clockwise, zero along +x.
 */

export const TWO_PI = 2 * Math.PI;

/** Wrap an angle to (-pi, pi]. */
export function wrapAngle(a: number): number {
  let r = a % TWO_PI;
  if (r > Math.PI) r -= TWO_PI;
  else if (r <= -Math.PI) r += TWO_PI;
  return r;
}

/** Shortest-arc interpolation between two yaw samples. */
export function interpolateYaw(a: number, b: number, u: number): number {
  return wrapAngle(a + wrapAngle(b - a) * u);
}

export function degrees(rad: number): number {
  return (rad * 180) / Math.PI;
}

/** Index of the last sample time <= t in an ascending array (clamped). */
export function sampleIndex(times: number[], t: number): number {
  let lo = 0;
  let hi = times.length - 1;
  if (t <= times[0]) return 0;
  if (t >= times[hi]) return hi;
  while (hi - lo > 1) {
    const mid = (lo + hi) >> 1;
    if (times[mid] <= t) lo = mid;
    else hi = mid;
  }
  return lo;
}

/** Piecewise-linear value lookup on (times, values). */
export function interpolateLinear(times: number[], values: number[], t: number): number {
  const i = sampleIndex(times, t);
  if (i >= times.length - 1) return values[values.length - 1];
  const span = times[i + 1] - times[i];
  const u = span > 0 ? (t - times[i]) / span : 0;
  return values[i] + (values[i + 1] - values[i]) * u;
}

/** Piecewise-linear yaw lookup with shortest-arc wrapping. */
export function interpolateYawTrack(times: number[], yaws: number[], t: number): number {
  const i = sampleIndex(times, t);
  if (i >= times.length - 1) return wrapAngle(yaws[yaws.length - 1]);
  const span = times[i + 1] - times[i];
  const u = span > 0 ? (t - times[i]) / span : 0;
  return interpolateYaw(yaws[i], yaws[i + 1], u);
}
