/** Column raycasting renderer: walls become vertical slabs, pedestrians
 *  become billboarded capsules, all on a plain 2D canvas. Deliberately
 *  minimal; the point is the motion of the viewpoint, not scene fidelity.
 */

import type { ViewerBundle } from "./bundle.js";
import { robotPositionAt } from "./state.js";
import type { ViewerState } from "./state.js";
import { cameraWorldYaw } from "./state.js";
import { sampleIndex, interpolateLinear } from "./angles.js";

const FOV = (78 * Math.PI) / 180;
const PED_RADIUS = 0.18;
const PED_HEIGHT = 1.7;

const SKY = "#202838";
const FLOOR = "#3a3f46";

export class Renderer {
  private ctx: CanvasRenderingContext2D;
  private depth: Float32Array;

  constructor(private canvas: HTMLCanvasElement) {
    const ctx = canvas.getContext("2d");
    if (!ctx) throw new Error("2d canvas context unavailable");
    this.ctx = ctx;
    this.depth = new Float32Array(canvas.width);
  }

  render(state: ViewerState, bundle: ViewerBundle): void {
    const { ctx } = this;
    const w = this.canvas.width;
    const h = this.canvas.height;
    if (this.depth.length !== w) this.depth = new Float32Array(w);

    const [px, py] = robotPositionAt(bundle, state.playbackT);
    const yaw = cameraWorldYaw(state, bundle);
    const focal = w / 2 / Math.tan(FOV / 2);
    const horizon = h / 2 + Math.tan(state.headPitch) * focal;
    const camZ = bundle.camera_height;

    ctx.fillStyle = SKY;
    ctx.fillRect(0, 0, w, Math.max(0, Math.min(h, horizon)));
    ctx.fillStyle = FLOOR;
    ctx.fillRect(0, Math.max(0, Math.min(h, horizon)), w, h);

    const dirX = Math.cos(yaw);
    const dirY = Math.sin(yaw);

    for (let col = 0; col < w; col++) {
      // screen column to world ray (perpendicular-depth convention)
      const s = ((w / 2 - col) / focal) * 1.0;
      let rx = dirX - dirY * s;
      let ry = dirY + dirX * s;
      const best = nearestWallHit(bundle.walls, px, py, rx, ry);
      this.depth[col] = best.t;
      if (!isFinite(best.t)) continue;
      // perpendicular distance removes the fisheye
      const perp = best.t * (rx * dirX + ry * dirY);
      const topY = horizon + ((camZ - bundle.wall_height) / perp) * focal;
      const botY = horizon + (camZ / perp) * focal;
      const shade = Math.max(0.25, Math.min(1, 2.2 / (1 + perp * 0.35)));
      const base = best.vertical ? 176 : 148;
      const c = Math.round(base * shade);
      ctx.fillStyle = `rgb(${c},${c + 6},${c + 12})`;
      ctx.fillRect(col, topY, 1, Math.max(1, botY - topY));
    }

    this.drawPedestrians(state, bundle, px, py, dirX, dirY, focal, horizon, camZ);
  }

  private drawPedestrians(
    state: ViewerState,
    bundle: ViewerBundle,
    px: number,
    py: number,
    dirX: number,
    dirY: number,
    focal: number,
    horizon: number,
    camZ: number,
  ): void {
    const { ctx } = this;
    const w = this.canvas.width;
    const times = bundle.robot_track.t;
    const i = sampleIndex(times, state.playbackT);

    for (const ped of bundle.pedestrians) {
      const pos = pedPositionAt(ped.points, times, i, state.playbackT);
      if (!pos) continue;
      const relX = pos[0] - px;
      const relY = pos[1] - py;
      const depth = relX * dirX + relY * dirY;
      if (depth < 0.15) continue;
      const lateral = -relX * dirY + relY * dirX;
      const cx = w / 2 - (lateral / depth) * focal;
      const half = ((PED_RADIUS / depth) * focal) | 0;
      const topY = horizon + ((camZ - PED_HEIGHT) / depth) * focal;
      const botY = horizon + (camZ / depth) * focal;
      const shade = Math.max(0.3, Math.min(1, 2.2 / (1 + depth * 0.35)));
      ctx.fillStyle = `rgba(${Math.round(214 * shade)},${Math.round(120 * shade)},${Math.round(
        90 * shade,
      )},1)`;
      const x0 = Math.max(0, Math.floor(cx - half));
      const x1 = Math.min(w - 1, Math.ceil(cx + half));
      for (let col = x0; col <= x1; col++) {
        if (depth < this.depth[col]) {
          ctx.fillRect(col, topY, 1, Math.max(1, botY - topY));
        }
      }
      // a rounded cap so it reads as a person, not a pillar
      if (depth < this.depth[Math.min(w - 1, Math.max(0, Math.round(cx)))]) {
        ctx.beginPath();
        ctx.arc(cx, topY, Math.max(1, half), Math.PI, 0);
        ctx.fill();
      }
    }
  }
}

function nearestWallHit(
  walls: Array<[number, number, number, number]>,
  px: number,
  py: number,
  rx: number,
  ry: number,
): { t: number; vertical: boolean } {
  let bestT = Infinity;
  let vertical = false;
  for (const [x0, y0, x1, y1] of walls) {
    const ex = x1 - x0;
    const ey = y1 - y0;
    const denom = rx * ey - ry * ex;
    if (Math.abs(denom) < 1e-12) continue;
    const dx = x0 - px;
    const dy = y0 - py;
    const t = (dx * ey - dy * ex) / denom;
    if (t <= 1e-9 || t >= bestT) continue;
    const u = ex !== 0 ? (px + rx * t - x0) / ex : (py + ry * t - y0) / ey;
    if (u < 0 || u > 1) continue;
    bestT = t;
    vertical = ex === 0;
  }
  return { t: bestT, vertical };
}

function pedPositionAt(
  points: Array<[number, number] | null>,
  times: number[],
  i: number,
  t: number,
): [number, number] | null {
  const a = points[i];
  const b = points[Math.min(i + 1, points.length - 1)];
  if (!a) return b ?? null;
  if (!b || i + 1 >= points.length) return a;
  const span = times[i + 1] - times[i];
  const u = span > 0 ? (t - times[i]) / span : 0;
  return [a[0] + (b[0] - a[0]) * u, a[1] + (b[1] - a[1]) * u];
}

/** Top-down minimap with the view direction; cheap and orienting. */
export function drawMinimap(
  canvas: HTMLCanvasElement,
  state: ViewerState,
  bundle: ViewerBundle,
): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const [bx0, by0, bx1, by1] = bundle.bounds;
  const scale = Math.min(canvas.width / (bx1 - bx0), canvas.height / (by1 - by0));
  const X = (x: number) => (x - bx0) * scale;
  const Y = (y: number) => canvas.height - (y - by0) * scale;

  ctx.fillStyle = "rgba(12,14,18,0.85)";
  ctx.fillRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "#9aa4b0";
  ctx.lineWidth = 1;
  ctx.beginPath();
  for (const [x0, y0, x1, y1] of bundle.walls) {
    ctx.moveTo(X(x0), Y(y0));
    ctx.lineTo(X(x1), Y(y1));
  }
  ctx.stroke();

  const [px, py] = robotPositionAt(bundle, state.playbackT);
  const yaw = cameraWorldYaw(state, bundle);
  ctx.fillStyle = "#58b0ff";
  ctx.beginPath();
  ctx.arc(X(px), Y(py), 4, 0, 2 * Math.PI);
  ctx.fill();
  ctx.strokeStyle = "#58b0ff";
  ctx.beginPath();
  ctx.moveTo(X(px), Y(py));
  ctx.lineTo(X(px + 1.4 * Math.cos(yaw)), Y(py + 1.4 * Math.sin(yaw)));
  ctx.stroke();

  const times = bundle.robot_track.t;
  const i = sampleIndex(times, state.playbackT);
  ctx.fillStyle = "#e0875e";
  for (const ped of bundle.pedestrians) {
    const pos = pedPositionAt(ped.points, times, i, state.playbackT);
    if (!pos) continue;
    ctx.beginPath();
    ctx.arc(X(pos[0]), Y(pos[1]), 3, 0, 2 * Math.PI);
    ctx.fill();
  }
}

export { interpolateLinear };
