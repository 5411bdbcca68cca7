// Palette and property-panel metadata for the built-in action vocabulary.
// Mirrors the server registry for display purposes only; validation always
// comes from the service.

import type { ActionCategory } from "./types";

export interface ParamMeta {
  name: string;
  unit: string;
  defaultValue: number | null;
}

export interface ActionMeta {
  name: string;
  category: ActionCategory;
  twoActor: boolean;
  complexity: number;
  params: ParamMeta[];
}

const p = (name: string, unit: string, defaultValue: number | null = null): ParamMeta => ({
  name,
  unit,
  defaultValue,
});

export const ACTIONS: ActionMeta[] = [
  { name: "Accelerate", category: "Longitudinal", twoActor: false, complexity: 1,
    params: [p("target_velocity", "m/s", 8), p("throttle", "ratio", 0.5)] },
  { name: "Decelerate", category: "Longitudinal", twoActor: false, complexity: 1,
    params: [p("target_velocity", "m/s", 0), p("brake", "ratio", 0.5)] },
  { name: "KeepVelocity", category: "Longitudinal", twoActor: false, complexity: 1,
    params: [p("velocity", "m/s", 8), p("duration", "s", 2)] },
  { name: "DriveDistance", category: "Longitudinal", twoActor: false, complexity: 1,
    params: [p("distance", "m", 50)] },
  { name: "FollowVehicle", category: "Longitudinal", twoActor: true, complexity: 2,
    params: [p("gap", "m", 10), p("duration", "s", 5)] },
  { name: "Stop", category: "Longitudinal", twoActor: false, complexity: 1,
    params: [p("deceleration", "m/s^2", 3)] },
  { name: "LaneChangeLeft", category: "Lateral", twoActor: false, complexity: 2,
    params: [p("lateral_offset", "m", 3.5), p("duration", "s", 2)] },
  { name: "LaneChangeRight", category: "Lateral", twoActor: false, complexity: 2,
    params: [p("lateral_offset", "m", 3.5), p("duration", "s", 2)] },
  { name: "TurnLeft", category: "Lateral", twoActor: false, complexity: 1,
    params: [p("turn_radius", "m", 6), p("heading_change", "rad", 1.5707963267948966)] },
  { name: "TurnRight", category: "Lateral", twoActor: false, complexity: 1,
    params: [p("turn_radius", "m", 6), p("heading_change", "rad", 1.5707963267948966)] },
  { name: "InLocationRadius", category: "Condition", twoActor: false, complexity: 1,
    params: [p("x", "m", 0), p("y", "m", 0), p("radius", "m", 2)] },
  { name: "InVehicleRadius", category: "Condition", twoActor: true, complexity: 1,
    params: [p("radius", "m", 10)] },
  { name: "TimeElapsed", category: "Condition", twoActor: false, complexity: 1,
    params: [p("duration", "s", 1)] },
  { name: "SpeedReached", category: "Condition", twoActor: false, complexity: 1,
    params: [p("speed", "m/s", null)] },
];

export function actionMeta(name: string): ActionMeta | undefined {
  return ACTIONS.find((action) => action.name === name);
}
