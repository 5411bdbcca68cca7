import { describe, expect, it } from "vitest";

import { buildPanelModel, formatParamValue, paramMode, parseParamInput } from "../src/panel";
import type { NodeRecord, ScenarioDocument } from "../src/types";
import { fixtureJson } from "./helpers";

function node(id: string): NodeRecord {
  const doc = fixtureJson<ScenarioDocument>("uis2.json");
  const found = doc.nodes.find((candidate) => candidate.id === id);
  if (!found) throw new Error(`no node ${id}`);
  return found;
}

describe("property panel model", () => {
  it("lists declared parameters with units and modes", () => {
    const model = buildPanelModel(node("ego_turn"));
    expect(model.parameters.map((row) => row.key)).toEqual(["turn_radius", "heading_change"]);
    expect(model.parameters[0]!.unit).toBe("m");
    expect(model.parameters[0]!.mode).toBe("scalar");
  });

  it("misc section exposes read-only category and complexity", () => {
    const model = buildPanelModel(node("ego_turn"));
    expect(model.misc).toEqual({
      name: "ego_turn",
      maneuverType: "TurnLeft",
      category: "Lateral",
      complexity: 1,
    });
  });

  it("join nodes have no parameter rows", () => {
    const model = buildPanelModel({ id: "j", kind: "Join", policy: "AllFinished" });
    expect(model.parameters).toEqual([]);
    expect(model.misc).toBeNull();
  });

  it("mode switch follows the value shape", () => {
    expect(paramMode(null)).toBe("unset");
    expect(paramMode({ scalar: 5, unit: "m" })).toBe("scalar");
    expect(paramMode({ range: [3, 8, 1], unit: "m/s" })).toBe("range");
    expect(paramMode({ set: [5, 10], unit: "m" })).toBe("set");
  });
});

describe("parameter input parsing", () => {
  it("parses each mode", () => {
    expect(parseParamInput("scalar", "6", "m/s")).toEqual({ scalar: 6, unit: "m/s" });
    expect(parseParamInput("scalar", "dusk", "")).toEqual({ scalar: "dusk", unit: "" });
    expect(parseParamInput("range", "3 8 1", "m/s")).toEqual({ range: [3, 8, 1], unit: "m/s" });
    expect(parseParamInput("set", "5, 10", "m")).toEqual({ set: [5, 10], unit: "m" });
    expect(parseParamInput("scalar", "", "m")).toBeNull();
  });

  it("rejects malformed ranges", () => {
    expect(() => parseParamInput("range", "8 3 1", "m")).toThrow();
    expect(() => parseParamInput("range", "1 2", "m")).toThrow();
    expect(() => parseParamInput("range", "1 2 0", "m")).toThrow();
  });

  it("round-trips through formatting", () => {
    for (const value of [
      { scalar: 6, unit: "m/s" },
      { range: [3, 8, 1] as [number, number, number], unit: "m/s" },
      { set: [5, 10], unit: "m" },
    ]) {
      const mode = paramMode(value);
      expect(parseParamInput(mode, formatParamValue(value), value.unit)).toEqual(value);
    }
  });
});
