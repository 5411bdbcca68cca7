// Property panel model: editable Parameters (scalar/range/set mode per
// value) and a read-only Misc section. Pure model in, DOM rendering out.

import { actionMeta } from "./registry";
import type { NodeRecord, ParamValueJson } from "./types";

export type ParamMode = "unset" | "scalar" | "range" | "set";

export interface ParamRow {
  key: string;
  unit: string;
  mode: ParamMode;
  value: ParamValueJson;
}

export interface PanelModel {
  nodeId: string;
  parameters: ParamRow[];
  misc: {
    name: string;
    maneuverType: string;
    category: string;   // read-only
    complexity: number; // read-only, registry metadata
  } | null;
}

export function paramMode(value: ParamValueJson): ParamMode {
  if (value === null) return "unset";
  if ("scalar" in value) return "scalar";
  if ("range" in value) return "range";
  return "set";
}

export function buildPanelModel(node: NodeRecord): PanelModel {
  if (node.kind !== "Maneuver" && node.kind !== "Condition") {
    return { nodeId: node.id, parameters: [], misc: null };
  }
  const meta = actionMeta(node.action_type ?? "");
  const parameters: ParamRow[] = (meta?.params ?? []).map((spec) => {
    const value = node.params?.[spec.name] ?? null;
    return { key: spec.name, unit: spec.unit, mode: paramMode(value), value };
  });
  return {
    nodeId: node.id,
    parameters,
    misc: {
      name: node.id,
      maneuverType: node.action_type ?? "",
      category: node.category ?? "",
      complexity: meta?.complexity ?? 1,
    },
  };
}

/** Parse one edited field back into a wire value; empty text means unset. */
export function parseParamInput(mode: ParamMode, text: string, unit: string): ParamValueJson {
  const trimmed = text.trim();
  if (mode === "unset" || trimmed === "") return null;
  if (mode === "scalar") {
    const numeric = Number(trimmed);
    return { scalar: Number.isNaN(numeric) ? trimmed : numeric, unit };
  }
  if (mode === "range") {
    const parts = trimmed.split(/[,;\s]+/).map(Number);
    if (parts.length !== 3 || parts.some(Number.isNaN)) {
      throw new Error("range needs: min max step");
    }
    const [min, max, step] = parts as [number, number, number];
    if (min > max || step <= 0) throw new Error("range needs min <= max and step > 0");
    return { range: [min, max, step], unit };
  }
  const values = trimmed.split(/[,;\s]+/).map((part) => {
    const numeric = Number(part);
    return Number.isNaN(numeric) ? part : numeric;
  });
  if (values.length === 0) throw new Error("set needs at least one value");
  return { set: values, unit };
}

export function formatParamValue(value: ParamValueJson): string {
  if (value === null) return "";
  if ("scalar" in value) return String(value.scalar);
  if ("range" in value) return value.range.join(" ");
  return value.set.join(" ");
}
