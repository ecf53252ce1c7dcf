/** DOM overlay with the live numbers the study cared about. */

import type { HudMetrics } from "./state.js";
import { degrees } from "./angles.js";

export function formatHud(m: HudMetrics, duration: number): string {
  const clearance = m.minClearance === null ? "--" : `${m.minClearance.toFixed(2)} m`;
  return [
    `mode ${m.mode}${m.paused ? "  [paused]" : ""}`,
    `t ${m.t.toFixed(1)} / ${duration.toFixed(1)} s`,
    `robot yaw ${degrees(m.robotYaw).toFixed(1)} deg`,
    `view yaw ${degrees(m.viewYaw).toFixed(1)} deg`,
    `deviation ${m.deviationDeg.toFixed(1)} deg`,
    `min clearance ${clearance}`,
  ].join("\n");
}

export class Hud {
  constructor(private el: HTMLElement) {}

  update(m: HudMetrics, duration: number): void {
    this.el.textContent = formatHud(m, duration);
  }
}
