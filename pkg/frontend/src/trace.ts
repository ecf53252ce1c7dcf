/** Recording the user's head motion so a session can feed the analysis
 *  pipeline (headtrace/1 is directly importable by the analyze command).
 */

export interface TraceSample {
  t: number;
  yaw: number;
}

export class HeadTraceRecorder {
  private samples: TraceSample[] = [];

  record(t: number, yaw: number): void {
    const last = this.samples[this.samples.length - 1];
    if (last && t < last.t) return; // scrubbing backwards is not recorded
    if (last && t === last.t) {
      last.yaw = yaw;
      return;
    }
    this.samples.push({ t, yaw });
  }

  get length(): number {
    return this.samples.length;
  }

  toDocument(): { format: string; samples: Array<[number, number]> } {
    return {
      format: "headtrace/1",
      samples: this.samples.map((s) => [s.t, s.yaw]),
    };
  }

  /** Serialized headtrace/1 JSON (what the download button saves). */
  toJson(): string {
    return JSON.stringify(this.toDocument());
  }

  clear(): void {
    this.samples = [];
  }
}
