// Node styling is a pure function of (kind, category, policy), following
// the node legend: longitudinal maneuvers yellow, lateral red, composite
// and modules green, conditions blue, joins split by policy, terminals gray.

import type { ActionCategory, JoinPolicy, NodeKind } from "./types";

export interface NodeStyle {
  fill: string;
  stroke: string;
  text: string;
  shape: "pill" | "rect" | "diamond" | "circle" | "octagon" | "frame";
  icon: string;
}

export function nodeStyle(
  kind: NodeKind,
  category?: ActionCategory,
  policy?: JoinPolicy,
): NodeStyle {
  switch (kind) {
    case "RootNode":
      return { fill: "#e8e8e8", stroke: "#555555", text: "#222222", shape: "circle", icon: "▶" };
    case "EndNode":
      return { fill: "#3d3d3d", stroke: "#1a1a1a", text: "#ffffff", shape: "octagon", icon: "■" };
    case "Condition":
      return { fill: "#3f8efc", stroke: "#1d5fc2", text: "#ffffff", shape: "pill", icon: "◉" };
    case "Join":
      return policy === "OneFinished"
        ? { fill: "#9b6dd7", stroke: "#6a41a1", text: "#ffffff", shape: "diamond", icon: "?" }
        : { fill: "#9b6dd7", stroke: "#6a41a1", text: "#ffffff", shape: "diamond", icon: "⇉" };
    case "ModuleInstance":
      return { fill: "#57b26a", stroke: "#2f7a40", text: "#ffffff", shape: "frame", icon: "▣" };
    case "Maneuver":
      switch (category) {
        case "Lateral":
          return { fill: "#e05252", stroke: "#a32f2f", text: "#ffffff", shape: "rect", icon: "⇄" };
        case "Composite":
          return { fill: "#57b26a", stroke: "#2f7a40", text: "#ffffff", shape: "rect", icon: "◆" };
        default:  // Longitudinal
          return { fill: "#f2c94c", stroke: "#b28f1e", text: "#333333", shape: "rect", icon: "→" };
      }
  }
}

export function badgeColor(severity: "Error" | "Warning"): string {
  return severity === "Error" ? "#d8323c" : "#e8a33d";
}
