// Wire types mirroring the scenograph service's document formats.
// The server owns the semantics; the editor never re-derives rules.

export type ParamValueJson =
  | null
  | { scalar: number | string; unit: string }
  | { range: [number, number, number]; unit: string }
  | { set: Array<number | string>; unit: string };

export type NodeKind =
  | "RootNode"
  | "EndNode"
  | "Maneuver"
  | "Condition"
  | "Join"
  | "ModuleInstance";

export type ActionCategory = "Longitudinal" | "Lateral" | "Composite" | "Condition";
export type JoinPolicy = "AllFinished" | "OneFinished";
export type ActorCategory = "Pedestrian" | "TwoWheeler" | "FourWheeler";

export interface NodeRecord {
  id: string;
  kind: NodeKind;
  action_type?: string;
  category?: ActionCategory;
  ref_actor?: string;
  target_actor?: string | null;
  params?: Record<string, ParamValueJson>;
  policy?: JoinPolicy;
  module?: string;
  bindings?: Record<string, string>;
  overrides?: Record<string, Record<string, ParamValueJson>>;
}

export interface EdgeRecord {
  from: string;
  to: string;
  from_port?: string;
  to_port?: string;
}

export interface ActorRecord {
  id: string;
  name: string;
  category: ActorCategory;
  model: string;
  is_ego: boolean;
  start_pose: { x: ParamValueJson; y: ParamValueJson; heading: ParamValueJson };
  start_speed: ParamValueJson;
}

export interface ModuleDefRecord {
  name: string;
  roles: string[];
  elements: NodeRecord[];
  edges: EdgeRecord[];
  in_ports: Record<string, string>;
  out_ports: Record<string, string>;
}

export interface ScenarioDocument {
  format_version: string;
  name: string;
  map: string;
  abstraction_level: "Functional" | "Logical" | "Concrete";
  environment: Record<string, ParamValueJson>;
  actors: ActorRecord[];
  nodes: NodeRecord[];
  edges: EdgeRecord[];
  module_defs: ModuleDefRecord[];
}

export interface Finding {
  rule_id: string;
  severity: "Error" | "Warning";
  node_ids: string[];
  message: string;
}

export interface ValidationReport {
  is_valid: boolean;
  findings: Finding[];
}

export interface ActorStateJson {
  x: number;
  y: number;
  heading: number;
  speed: number;
  accel: number;
}

export interface TraceJson {
  tick_config: { dt: number; max_time: number; seed: number };
  events: Array<{ time: number; node: string; state: string }>;
  states: Array<{ time: number; actors: Record<string, ActorStateJson> }>;
  outcome: {
    kind: "Completed" | "Collision" | "Timeout";
    pair: [string, string] | null;
    time: number | null;
    completion_time: number | null;
    min_distance: number | null;
  } | null;
}

export interface SessionInfo {
  id: string;
  revision: number;
  scenario: ScenarioDocument;
}
