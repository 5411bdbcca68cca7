// Trace playback: time scrubbing with linear interpolation between the
// sampled world states, plus the outcome banner shown over the canvas.

import type { ActorStateJson, TraceJson } from "./types";

export interface BannerInfo {
  kind: "Completed" | "Collision" | "Timeout";
  text: string;
  /** collision moment to highlight, when there is one */
  highlightTime: number | null;
}

export function bannerInfo(trace: TraceJson): BannerInfo {
  const outcome = trace.outcome;
  if (!outcome) return { kind: "Timeout", text: "no outcome", highlightTime: null };
  if (outcome.kind === "Collision" && outcome.pair && outcome.time !== null) {
    const [a, b] = outcome.pair;
    return {
      kind: "Collision",
      text: `Collision: ${a} × ${b} at t=${outcome.time.toFixed(2)}s`,
      highlightTime: outcome.time,
    };
  }
  if (outcome.kind === "Completed") {
    const when = outcome.completion_time ?? 0;
    return { kind: "Completed", text: `Completed at t=${when.toFixed(2)}s`, highlightTime: null };
  }
  return { kind: "Timeout", text: "Timeout: scenario never finished", highlightTime: null };
}

export class Playback {
  readonly trace: TraceJson;
  time = 0;
  playing = false;
  speed = 1;

  constructor(trace: TraceJson) {
    this.trace = trace;
  }

  get duration(): number {
    const states = this.trace.states;
    return states.length ? states[states.length - 1]!.time : 0;
  }

  /** Scrubber position in [0, 1]. */
  get progress(): number {
    return this.duration > 0 ? this.time / this.duration : 0;
  }

  seekProgress(fraction: number): void {
    const clamped = Math.min(1, Math.max(0, fraction));
    this.time = clamped * this.duration;
  }

  /** Advance by wall-clock dt; returns false when the end is reached. */
  tick(wallDt: number): boolean {
    if (!this.playing) return false;
    this.time += wallDt * this.speed;
    if (this.time >= this.duration) {
      this.time = this.duration;
      this.playing = false;
    }
    return this.playing;
  }

  stateAt(time: number): Record<string, ActorStateJson> {
    const states = this.trace.states;
    if (states.length === 0) return {};
    const clamped = Math.min(Math.max(time, states[0]!.time), states[states.length - 1]!.time);
    let low = 0;
    let high = states.length - 1;
    while (high - low > 1) {
      const mid = (low + high) >> 1;
      if (states[mid]!.time <= clamped) low = mid;
      else high = mid;
    }
    const before = states[low]!;
    const after = states[high]!;
    if (clamped <= before.time || after.time <= before.time) {
      return structuredClone(before.actors);
    }
    if (clamped >= after.time) return structuredClone(after.actors);
    const alpha = (clamped - before.time) / (after.time - before.time);
    const blended: Record<string, ActorStateJson> = {};
    for (const [actorId, state0] of Object.entries(before.actors)) {
      const state1 = after.actors[actorId]!;
      let headingDelta = state1.heading - state0.heading;
      headingDelta = Math.atan2(Math.sin(headingDelta), Math.cos(headingDelta));
      blended[actorId] = {
        x: state0.x + alpha * (state1.x - state0.x),
        y: state0.y + alpha * (state1.y - state0.y),
        heading: state0.heading + alpha * headingDelta,
        speed: state0.speed + alpha * (state1.speed - state0.speed),
        accel: state0.accel + alpha * (state1.accel - state0.accel),
      };
    }
    return blended;
  }

  current(): Record<string, ActorStateJson> {
    return this.stateAt(this.time);
  }
}
