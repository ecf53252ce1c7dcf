/** Viewer entry point: load a bundle, lock the pointer, run the loop.
 *
 * Keys: click to capture the mouse, Space pauses playback, M toggles
 * UR/CR (continuously, the view never jumps), R restarts, T downloads
 * the recorded head trace as headtrace/1 JSON.
 */

import { loadBundle, ViewerBundle } from "./bundle.js";
import { Hud } from "./hud.js";
import { drawMinimap, Renderer } from "./render.js";
import {
  advancePlayback,
  applyPointerDelta,
  hudMetrics,
  initialState,
  toggleMode,
  ViewerState,
} from "./state.js";
import { HeadTraceRecorder } from "./trace.js";

async function start(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const url = params.get("bundle") ?? "./campus_lite.bundle.json";

  const canvas = document.getElementById("view") as HTMLCanvasElement;
  const minimap = document.getElementById("minimap") as HTMLCanvasElement;
  const hudEl = document.getElementById("hud") as HTMLElement;
  const banner = document.getElementById("banner") as HTMLElement;

  let bundle: ViewerBundle;
  try {
    bundle = await loadBundle(url);
  } catch (err) {
    banner.textContent = `could not load bundle: ${err}\n` +
      "generate one with: unwindsim export --replay R --scenario S --out frontend/campus_lite.bundle.json";
    return;
  }
  banner.textContent =
    `bundle loaded (${bundle.duration.toFixed(1)} s, recorded in ${bundle.recorded_mode}). ` +
    "click to look around | space pause | M toggle UR/CR | R restart | T save head trace";

  let state: ViewerState = initialState("UR");
  const renderer = new Renderer(canvas);
  const hud = new Hud(hudEl);
  const recorder = new HeadTraceRecorder();

  canvas.addEventListener("click", () => {
    if (document.pointerLockElement !== canvas) canvas.requestPointerLock();
  });
  document.addEventListener("mousemove", (e) => {
    if (document.pointerLockElement === canvas) {
      state = applyPointerDelta(state, e.movementX, e.movementY);
    }
  });
  document.addEventListener("keydown", (e) => {
    if (e.code === "Space") {
      state = { ...state, paused: !state.paused };
      e.preventDefault();
    } else if (e.code === "KeyM") {
      state = toggleMode(state, bundle);
    } else if (e.code === "KeyR") {
      state = { ...state, playbackT: 0 };
      recorder.clear();
    } else if (e.code === "KeyT") {
      downloadTrace(recorder);
    }
  });

  let last = performance.now();
  function frame(now: number): void {
    const dtWall = Math.min(0.1, (now - last) / 1000);
    last = now;
    state = advancePlayback(state, bundle, dtWall);
    if (!state.paused) recorder.record(state.playbackT, state.headYaw);
    renderer.render(state, bundle);
    drawMinimap(minimap, state, bundle);
    hud.update(hudMetrics(state, bundle), bundle.duration);
    requestAnimationFrame(frame);
  }
  requestAnimationFrame(frame);
}

function downloadTrace(recorder: HeadTraceRecorder): void {
  const blob = new Blob([recorder.toJson()], { type: "application/json" });
  const a = document.createElement("a");
  a.href = URL.createObjectURL(blob);
  a.download = "headtrace.json";
  a.click();
  URL.revokeObjectURL(a.href);
}

start();
